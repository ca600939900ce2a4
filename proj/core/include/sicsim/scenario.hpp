#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sicsim/canceller.hpp"
#include "sicsim/channel.hpp"
#include "sicsim/lms.hpp"
#include "sicsim/metrics.hpp"
#include "sicsim/pa.hpp"
#include "sicsim/spectral.hpp"
#include "sicsim/waveform.hpp"

namespace sicsim {

// Invalid or missing configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-branch control mode: adaptive, manual with an explicit complex weight,
// or manual with the weight taken from the least-squares solution over the
// run's own record (how the hardware's hand-tuned "best performance" branch
// is reproduced).
struct BranchSpec {
    BranchMode mode = BranchMode::adaptive;
    std::optional<cdouble> manual_weight;  // nullopt in manual mode = least squares
};

struct SoiSpec {
    double bandwidth_hz = 2e6;
    double power_dbm = -50.0;
};

struct OutputFlags {
    bool report = true;
    bool psd = true;
    bool weight_trace = true;
};

struct ScenarioConfig {
    std::string name;
    std::string description;
    double sample_rate_hz = 500e6;
    double duration_s = 20e-3;
    std::uint64_t seed = 1;
    WaveformSpec waveform;  // duration_s/seed filled from the scenario fields
    PaParams pa;
    SiChannel channel;
    CancellerConfig canceller;
    LmsConfig lms;
    std::vector<BranchSpec> branches;  // empty = all adaptive
    std::optional<SoiSpec> soi;
    std::optional<std::pair<double, double>> si_band_hz;  // default: waveform band
    OutputFlags outputs;
};

struct ScenarioResult {
    ScenarioConfig config;
    CancellationReport cancellation;
    double convergence_time_s = kNotConverged;
    std::vector<cdouble> final_weights;
    std::optional<SoiFidelity> soi;
    LmsTrace trace;
    PsdEstimate psd_tx, psd_y, psd_z;
    std::optional<PsdEstimate> psd_soi;
};

struct ScenarioInfo {
    std::string name;
    std::string description;
};

// Bundled scenarios reproducing the reference experiments; see README for the
// mapping table.
std::vector<ScenarioInfo> bundled_scenarios();
ScenarioConfig bundled_scenario(const std::string& name);  // ConfigError if unknown

ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);
std::string config_to_json(const ScenarioConfig& cfg);

// Full pipeline: waveform -> PA -> channel (+ SoI) -> adaptive canceller ->
// metrics. Deterministic per (config, seed).
ScenarioResult run_scenario(const ScenarioConfig& cfg);

// Writes report.json, psd_*.csv, and trace.csv into out_dir per the output
// flags; returns the paths written.
std::vector<std::string> write_outputs(const ScenarioResult& result,
                                       const std::string& out_dir);

std::string report_to_json(const ScenarioResult& result);

}  // namespace sicsim
