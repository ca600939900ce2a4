#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sicsim/scenario.hpp"
#include "sicsim/version.hpp"

namespace {

std::string resolve_out_dir(const std::string& cli_dir, const std::string& name) {
    if (!cli_dir.empty()) return cli_dir;
    if (const char* base = std::getenv("SICSIM_OUT_DIR"); base && *base)
        return (std::filesystem::path(base) / name).string();
    return (std::filesystem::path("out") / name).string();
}

int cmd_run(const std::string& target, std::optional<std::uint64_t> seed,
            std::optional<double> duration, const std::string& out_dir) {
    // A target that looks like a path must be one; only bare names fall
    // through to the bundled scenarios.
    const bool path_like = target.find('/') != std::string::npos ||
                           target.ends_with(".json");
    sicsim::ScenarioConfig cfg =
        std::filesystem::exists(target) ? sicsim::load_config(target)
        : path_like                     ? throw sicsim::ConfigError(
                                              "cannot open config file: " + target)
                                        : sicsim::bundled_scenario(target);
    if (seed) cfg.seed = *seed;
    if (duration) {
        if (!(*duration > 0.0)) throw sicsim::ConfigError("invalid field: duration_s (must be > 0)");
        cfg.duration_s = *duration;
    }

    const sicsim::ScenarioResult res = sicsim::run_scenario(cfg);
    const auto written = sicsim::write_outputs(res, resolve_out_dir(out_dir, cfg.name));

    std::printf("scenario        %s (seed %llu, %.6g s at %.6g MS/s)\n", cfg.name.c_str(),
                static_cast<unsigned long long>(cfg.seed), cfg.duration_s,
                cfg.sample_rate_hz / 1e6);
    std::printf("band            [%.6g, %.6g] MHz\n", res.cancellation.f_lo_hz / 1e6,
                res.cancellation.f_hi_hz / 1e6);
    std::printf("p_tx            %9.2f dBm\n", res.cancellation.p_tx_dbm);
    std::printf("p_rx intrinsic  %9.2f dBm\n", res.cancellation.p_y_dbm);
    std::printf("p_rx cancelled  %9.2f dBm\n", res.cancellation.p_z_dbm);
    std::printf("intrinsic       %9.2f dB\n", res.cancellation.intrinsic_db);
    std::printf("active          %9.2f dB\n", res.cancellation.active_db);
    std::printf("total           %9.2f dB\n", res.cancellation.total_db);
    if (res.convergence_time_s == sicsim::kNotConverged)
        std::printf("convergence     not converged\n");
    else
        std::printf("convergence     %9.3f us\n", res.convergence_time_s * 1e6);
    for (std::size_t b = 0; b < res.final_weights.size(); ++b)
        std::printf("w%zu              %+.6f %+.6fj\n", b, res.final_weights[b].real(),
                    res.final_weights[b].imag());
    if (res.soi)
        std::printf("soi             delta %+.3f dB, evm %.2f dB\n", res.soi->power_delta_db,
                    res.soi->evm_db);
    for (const auto& p : written) std::printf("wrote %s\n", p.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-interference canceller simulator"};
    app.set_version_flag("--version", sicsim::kVersion);
    app.require_subcommand(1);

    std::string target, out_dir, preset_name;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration;
    bool dump = false;

    auto* run = app.add_subcommand("run", "Run a scenario (config file path or bundled name)");
    run->add_option("config", target, "Config file or bundled scenario name")->required();
    run->add_option("--seed", seed, "Override the config seed");
    run->add_option("--duration", duration, "Override duration_s (seconds)");
    run->add_option("--out-dir", out_dir,
                    "Output directory (default: $SICSIM_OUT_DIR/<name> or out/<name>)");

    app.add_subcommand("list", "List bundled scenarios");

    auto* preset = app.add_subcommand("preset", "Show a bundled scenario");
    preset->add_option("name", preset_name, "Bundled scenario name")->required();
    preset->add_flag("--dump", dump, "Print the full config JSON for editing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(target, seed, duration, out_dir);
        if (preset->parsed()) {
            const sicsim::ScenarioConfig cfg = sicsim::bundled_scenario(preset_name);
            if (dump)
                std::printf("%s", sicsim::config_to_json(cfg).c_str());
            else
                std::printf("%s: %s\n", cfg.name.c_str(), cfg.description.c_str());
            return 0;
        }
        // list
        for (const auto& s : sicsim::bundled_scenarios())
            std::printf("%-20s %s\n", s.name.c_str(), s.description.c_str());
        return 0;
    } catch (const sicsim::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
