// linksim: WiMAX-style OFDM link simulator with ICI self-cancellation.
//
// Subcommands:
//   simulate  Monte-Carlo BER over an SNR grid
//   cir       noiseless carrier-to-interference sweep over a CFO grid
//   profile   print a SUI channel parameter set

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "linksim/ici.hpp"
#include "linksim/kernels/dispatch.hpp"
#include "linksim/sim.hpp"

namespace {

using linksim::sim::LinkConfig;

// "a:step:b" inclusive range, or a comma list, or a single value
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    const auto c1 = text.find(':');
    if (c1 != std::string::npos) {
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos) throw CLI::ValidationError("grid", "expected start:step:stop");
        const double start = std::stod(text.substr(0, c1));
        const double step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        const double stop = std::stod(text.substr(c2 + 1));
        if (step <= 0.0) throw CLI::ValidationError("grid", "step must be positive");
        for (double v = start; v <= stop + step * 1e-9; v += step) out.push_back(v);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto part = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!part.empty()) out.push_back(std::stod(part));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw CLI::ValidationError("grid", "empty grid");
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw linksim::sim::ConfigError("cannot open output file: " + path);
    f << content;
}

struct CommonOpts {
    std::string scheme = "pascs";
    std::string modulation = "qpsk";
    std::string channel = "sui1";
    double cfo = 0.0;
    bool correct_cfo = false;
    std::string snr = "0:2:20";
    int frames = 200;
    int cp_denominator = 4;
    double sample_rate = 4.0e6;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out;
    std::string config_path;
    std::string cfo_grid = "0.02:0.02:0.4";
    int cir_symbols = 1000;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--scheme", o.scheme, "standard | scm | pascs")
        ->check(CLI::IsMember({"standard", "scm", "pascs"}));
    cmd->add_option("--mod", o.modulation, "qpsk | qam16 | qam64")
        ->check(CLI::IsMember({"qpsk", "qam16", "qam64"}));
    cmd->add_option("--channel", o.channel,
                    "ideal | awgn | rayleigh | sui1..sui6");
    cmd->add_option("--cfo", o.cfo, "normalized carrier frequency offset");
    cmd->add_flag("--correct-cfo", o.correct_cfo, "enable pilot-based CFO correction");
    cmd->add_option("--frames", o.frames, "frames per point");
    cmd->add_option("--cp", o.cp_denominator, "cyclic prefix denominator (4, 8, 16, 32)");
    cmd->add_option("--sample-rate", o.sample_rate, "baseband sample rate in Hz");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--threads", o.threads, "worker threads (0 = auto)");
    cmd->add_option("--out", o.out, "output CSV path (default stdout)");
    cmd->add_option("--config", o.config_path,
                    "flat key=value file mirroring the flags; CLI overrides it");
}

// flat key=value lines, '#' comments; flag names without leading dashes
void apply_config_file(CLI::App* cmd, CommonOpts& o) {
    if (o.config_path.empty()) return;
    std::ifstream f(o.config_path);
    if (!f) throw linksim::sim::ConfigError("cannot read config file: " + o.config_path);
    auto given = [&](const std::string& flag) {
        const auto* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw linksim::sim::ConfigError(o.config_path + ":" +
                                                std::to_string(line_no) +
                                                ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (given("--" + key)) continue;  // command line wins
        if (key == "scheme") o.scheme = val;
        else if (key == "mod") o.modulation = val;
        else if (key == "channel") o.channel = val;
        else if (key == "cfo") o.cfo = std::stod(val);
        else if (key == "correct-cfo") o.correct_cfo = (val == "1" || val == "true" || val == "on");
        else if (key == "snr") o.snr = val;
        else if (key == "frames") o.frames = std::stoi(val);
        else if (key == "cp") o.cp_denominator = std::stoi(val);
        else if (key == "sample-rate") o.sample_rate = std::stod(val);
        else if (key == "seed") o.seed = std::stoull(val);
        else if (key == "threads") o.threads = std::stoi(val);
        else if (key == "out") o.out = val;
        else if (key == "cfo-grid") o.cfo_grid = val;
        else if (key == "symbols") o.cir_symbols = std::stoi(val);
        else
            throw linksim::sim::ConfigError(o.config_path + ": unknown key '" + key + "'");
    }
}

LinkConfig to_config(const CommonOpts& o) {
    LinkConfig cfg;
    cfg.scheme = *linksim::sim::parse_scheme(o.scheme);
    cfg.modulation = *linksim::sim::parse_modulation(o.modulation);
    const auto ch = linksim::sim::parse_channel(o.channel);
    if (!ch) throw linksim::sim::ConfigError("unknown channel: " + o.channel);
    cfg.channel = *ch;
    cfg.epsilon = o.cfo;
    cfg.cfo_correction = o.correct_cfo;
    cfg.n_frames = o.frames;
    cfg.cp_denominator = o.cp_denominator;
    cfg.sample_rate_hz = o.sample_rate;
    cfg.seed = o.seed;
    cfg.n_threads = o.threads;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"WiMAX-style OFDM link simulator with ICI self-cancellation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "linksim 1.0");

    CommonOpts sim_opts;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo BER over an SNR grid");
    add_common(sim_cmd, sim_opts);
    sim_cmd->add_option("--snr", sim_opts.snr, "SNR grid in dB: start:step:stop or list");

    CommonOpts cir_opts;
    auto* cir_cmd = app.add_subcommand("cir", "noiseless CIR sweep over a CFO grid");
    add_common(cir_cmd, cir_opts);
    cir_cmd->add_option("--cfo-grid", cir_opts.cfo_grid, "CFO grid: start:step:stop or list");
    cir_cmd->add_option("--symbols", cir_opts.cir_symbols, "OFDM symbols per grid point");

    int profile_model = 1;
    auto* prof_cmd = app.add_subcommand("profile", "print SUI channel parameters");
    prof_cmd->add_option("--model", profile_model, "SUI model number or name")
        ->transform(CLI::Transformer(std::map<std::string, int>{{"sui1", 1},
                                                                {"sui2", 2},
                                                                {"sui3", 3},
                                                                {"sui4", 4},
                                                                {"sui5", 5},
                                                                {"sui6", 6}},
                                     CLI::ignore_case));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim_cmd->parsed()) {
            apply_config_file(sim_cmd, sim_opts);
            LinkConfig cfg = to_config(sim_opts);
            cfg.snr_grid_db = parse_grid(sim_opts.snr);
            const auto rows = linksim::sim::run_link(cfg);
            write_output(sim_opts.out, linksim::sim::csv_string(rows));
        } else if (cir_cmd->parsed()) {
            apply_config_file(cir_cmd, cir_opts);
            LinkConfig cfg = to_config(cir_opts);
            const auto grid = parse_grid(cir_opts.cfo_grid);
            const auto rows = linksim::sim::measure_cir(cfg, grid, cir_opts.cir_symbols);
            write_output(cir_opts.out, linksim::sim::csv_string(rows));
        } else if (prof_cmd->parsed()) {
            const auto p = linksim::channel::sui_profile(profile_model);
            std::printf("model            %s (terrain %c)\n", p.name.c_str(), p.terrain);
            std::printf("tap power dB    ");
            for (double v : p.tap_power_db) std::printf(" %g", v);
            std::printf("\nK factor        ");
            for (double v : p.k_factor) std::printf(" %g", v);
            std::printf("\ntap delay us    ");
            for (double v : p.tap_delay_us) std::printf(" %g", v);
            std::printf("\nmax doppler Hz  ");
            for (double v : p.max_doppler_hz) std::printf(" %g", v);
            std::printf("\nantenna corr     %g\n", p.antenna_corr);
            std::printf("gain norm dB     %g\n", p.gain_norm_db);
        }
    } catch (const linksim::sim::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
