#include "sicsim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <utility>

#include <nlohmann/json.hpp>

#include "sicsim/delay.hpp"
#include "sicsim/version.hpp"

namespace sicsim {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void missing(const std::string& field) {
    throw ConfigError("missing field: " + field);
}

[[noreturn]] void invalid(const std::string& field, const std::string& why = "") {
    throw ConfigError("invalid field: " + field + (why.empty() ? "" : " (" + why + ")"));
}

const json& require(const json& j, const char* key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) missing(ctx.empty() ? key : ctx + "." + key);
    return *it;
}

double get_num(const json& j, const std::string& field) {
    if (!j.is_number()) invalid(field, "expected a number");
    return j.get<double>();
}

double req_num(const json& j, const char* key, const std::string& ctx) {
    const std::string field = ctx.empty() ? key : ctx + "." + key;
    return get_num(require(j, key, ctx), field);
}

std::uint64_t req_uint(const json& j, const char* key, const std::string& ctx) {
    const std::string field = ctx.empty() ? key : ctx + "." + key;
    const json& v = require(j, key, ctx);
    if (!v.is_number_unsigned() && !v.is_number_integer()) invalid(field, "expected an integer");
    const auto n = v.get<std::int64_t>();
    if (n < 0) invalid(field, "expected a non-negative integer");
    return static_cast<std::uint64_t>(n);
}

cdouble get_complex(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        invalid(field, "expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<double> get_num_array(const json& j, const std::string& field) {
    if (!j.is_array()) invalid(field, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) invalid(field, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

WaveformSpec parse_waveform(const json& j) {
    WaveformSpec w;
    const std::string kind = require(j, "kind", "waveform").get<std::string>();
    if (kind == "bandlimited_noise")
        w.kind = WaveformKind::bandlimited_noise;
    else if (kind == "two_tone")
        w.kind = WaveformKind::two_tone;
    else if (kind == "soi")
        w.kind = WaveformKind::soi;
    else
        invalid("waveform.kind", "unknown kind \"" + kind + "\"");
    if (w.kind == WaveformKind::two_tone)
        w.tone_spacing_hz = req_num(j, "tone_spacing_hz", "waveform");
    else
        w.bandwidth_hz = req_num(j, "bandwidth_hz", "waveform");
    w.power_dbm = req_num(j, "power_dbm", "waveform");
    return w;
}

PaParams parse_pa(const json& j) {
    PaParams p;
    if (j.contains("gain_db")) p.gain_db = get_num(j["gain_db"], "pa.gain_db");
    if (j.contains("a3") && !j["a3"].is_null()) p.a3 = get_complex(j["a3"], "pa.a3");
    if (j.contains("a5") && !j["a5"].is_null()) p.a5 = get_complex(j["a5"], "pa.a5");
    if (j.contains("lo_leakage_dbc") && !j["lo_leakage_dbc"].is_null())
        p.lo_leakage_dbc = get_num(j["lo_leakage_dbc"], "pa.lo_leakage_dbc");
    return p;
}

SiChannel parse_channel(const json& j) {
    SiChannel ch;
    const bool has_preset = j.contains("preset") && !j["preset"].is_null();
    const bool has_taps = j.contains("taps") && !j["taps"].is_null();
    if (has_preset == has_taps)
        invalid("channel", "exactly one of preset or taps is required");
    if (has_preset) {
        const std::string name = j["preset"].get<std::string>();
        if (name == "circulator")
            ch = preset(ChannelPreset::circulator);
        else if (name == "dual_antenna")
            ch = preset(ChannelPreset::dual_antenna);
        else
            invalid("channel.preset", "unknown preset \"" + name + "\"");
    } else {
        if (!j["taps"].is_array() || j["taps"].empty())
            invalid("channel.taps", "expected a non-empty array");
        std::size_t i = 0;
        for (const auto& t : j["taps"]) {
            const std::string ctx = "channel.taps[" + std::to_string(i++) + "]";
            ChannelTap tap;
            tap.delay_s = req_num(t, "delay_s", ctx);
            tap.gain_db = req_num(t, "gain_db", ctx);
            tap.phase_rad = req_num(t, "phase_rad", ctx);
            if (tap.delay_s < 0.0) invalid(ctx + ".delay_s", "must be >= 0");
            ch.taps.push_back(tap);
        }
    }
    if (j.contains("noise_floor_dbm") && !j["noise_floor_dbm"].is_null())
        ch.noise_floor_dbm = get_num(j["noise_floor_dbm"], "channel.noise_floor_dbm");
    else if (!has_preset)
        ch.noise_floor_dbm = -90.0;
    if (j.contains("events") && !j["events"].is_null()) {
        if (!j["events"].is_array()) invalid("channel.events", "expected an array");
        std::size_t i = 0;
        for (const auto& e : j["events"]) {
            const std::string ctx = "channel.events[" + std::to_string(i++) + "]";
            DisturbanceEvent ev;
            ev.time_s = req_num(e, "time_s", ctx);
            ev.tap_index = static_cast<std::size_t>(req_uint(e, "tap_index", ctx));
            const std::string kind = require(e, "kind", ctx).get<std::string>();
            if (kind == "step")
                ev.kind = DisturbanceEvent::Kind::step;
            else if (kind == "ramp")
                ev.kind = DisturbanceEvent::Kind::ramp;
            else
                invalid(ctx + ".kind", "expected step or ramp");
            ev.new_gain_db = req_num(e, "new_gain_db", ctx);
            ev.new_phase_rad = req_num(e, "new_phase_rad", ctx);
            if (ev.kind == DisturbanceEvent::Kind::ramp) {
                ev.ramp_duration_s = req_num(e, "ramp_duration_s", ctx);
                if (!(ev.ramp_duration_s > 0.0))
                    invalid(ctx + ".ramp_duration_s", "must be > 0");
            }
            ch.events.push_back(ev);
        }
    }
    return ch;
}

CancellerConfig parse_canceller(const json& j) {
    CancellerConfig c;
    if (j.contains("tap_delays_s") && !j["tap_delays_s"].is_null()) {
        c.tap_delays_s = get_num_array(j["tap_delays_s"], "canceller.tap_delays_s");
        if (c.tap_delays_s.empty()) invalid("canceller.tap_delays_s", "needs at least one tap");
    }
    if (j.contains("weight_cap") && !j["weight_cap"].is_null()) {
        const double cap = get_num(j["weight_cap"], "canceller.weight_cap");
        if (!(cap > 0.0)) invalid("canceller.weight_cap", "must be > 0");
        c.weight_cap = cap;
    }
    return c;
}

void parse_lms(const json& j, LmsConfig& lms, std::vector<BranchSpec>& branches) {
    if (j.contains("mu") && !j["mu"].is_null()) lms.mu = get_num(j["mu"], "lms.mu");
    if (!(lms.mu > 0.0)) invalid("lms.mu", "must be > 0");
    if (j.contains("integrator_dc_gain_db")) {
        if (j["integrator_dc_gain_db"].is_null())
            lms.integrator_dc_gain_db = std::numeric_limits<double>::infinity();
        else
            lms.integrator_dc_gain_db =
                get_num(j["integrator_dc_gain_db"], "lms.integrator_dc_gain_db");
    }
    auto opt_array = [&](const char* key, std::vector<double>& dst) {
        if (j.contains(key) && !j[key].is_null())
            dst = get_num_array(j[key], std::string("lms.") + key);
    };
    opt_array("dc_offset_i", lms.dc_offset_i);
    opt_array("dc_offset_q", lms.dc_offset_q);
    opt_array("nulling_offset_i", lms.nulling_offset_i);
    opt_array("nulling_offset_q", lms.nulling_offset_q);
    if (j.contains("trace_decim") && !j["trace_decim"].is_null())
        lms.trace_decim = static_cast<std::size_t>(req_uint(j, "trace_decim", "lms"));
    if (j.contains("residual_window") && !j["residual_window"].is_null())
        lms.residual_window = static_cast<std::size_t>(req_uint(j, "residual_window", "lms"));
    if (lms.trace_decim == 0) invalid("lms.trace_decim", "must be >= 1");
    if (lms.residual_window == 0) invalid("lms.residual_window", "must be >= 1");
    if (j.contains("branches") && !j["branches"].is_null()) {
        if (!j["branches"].is_array()) invalid("lms.branches", "expected an array");
        std::size_t i = 0;
        for (const auto& b : j["branches"]) {
            const std::string ctx = "lms.branches[" + std::to_string(i++) + "]";
            BranchSpec bs;
            const std::string mode = require(b, "mode", ctx).get<std::string>();
            if (mode == "adaptive")
                bs.mode = BranchMode::adaptive;
            else if (mode == "manual")
                bs.mode = BranchMode::manual;
            else
                invalid(ctx + ".mode", "expected adaptive or manual");
            if (b.contains("weight") && !b["weight"].is_null())
                bs.manual_weight = get_complex(b["weight"], ctx + ".weight");
            branches.push_back(bs);
        }
    }
}

std::pair<double, double> default_band(const WaveformSpec& w) {
    if (w.kind == WaveformKind::two_tone)
        return {-2.0 * w.tone_spacing_hz, 2.0 * w.tone_spacing_hz};
    return {-w.bandwidth_hz / 2.0, w.bandwidth_hz / 2.0};
}

void validate_config(const ScenarioConfig& c) {
    if (c.name.empty()) missing("name");
    if (!(c.sample_rate_hz > 0.0)) invalid("sample_rate_hz", "must be > 0");
    if (!(c.duration_s > 0.0)) invalid("duration_s", "must be > 0");
    if (c.waveform.kind != WaveformKind::two_tone &&
        c.waveform.bandwidth_hz >= c.sample_rate_hz)
        invalid("waveform.bandwidth_hz", "must be below sample_rate_hz");
    const std::size_t nb = c.canceller.n_taps();
    for (std::size_t i = 1; i < nb; ++i)
        if (!(c.canceller.tap_delays_s[i] > c.canceller.tap_delays_s[i - 1]))
            invalid("canceller.tap_delays_s", "must be strictly increasing");
    for (double d : c.canceller.tap_delays_s)
        if (d < 0.0) invalid("canceller.tap_delays_s", "must be >= 0");
    if (!c.branches.empty() && c.branches.size() != nb)
        invalid("lms.branches", "count does not match canceller taps");
    auto check_len = [&](const std::vector<double>& v, const char* name) {
        if (!v.empty() && v.size() != nb)
            invalid(std::string("lms.") + name, "count does not match canceller taps");
    };
    check_len(c.lms.dc_offset_i, "dc_offset_i");
    check_len(c.lms.dc_offset_q, "dc_offset_q");
    check_len(c.lms.nulling_offset_i, "nulling_offset_i");
    check_len(c.lms.nulling_offset_q, "nulling_offset_q");
    if (c.channel.taps.empty()) invalid("channel.taps", "needs at least one tap");
    for (std::size_t i = 0; i < c.channel.events.size(); ++i)
        if (c.channel.events[i].tap_index >= c.channel.taps.size())
            invalid("channel.events[" + std::to_string(i) + "].tap_index", "out of range");
    if (c.soi) {
        if (!(c.soi->bandwidth_hz > 0.0)) invalid("soi.bandwidth_hz", "must be > 0");
        if (c.soi->bandwidth_hz >= c.sample_rate_hz)
            invalid("soi.bandwidth_hz", "must be below sample_rate_hz");
    }
    if (c.si_band_hz) {
        const auto [lo, hi] = *c.si_band_hz;
        if (!(lo < hi) || lo < -c.sample_rate_hz / 2.0 || hi > c.sample_rate_hz / 2.0)
            invalid("si_band_hz", "expected [f_lo, f_hi] within the Nyquist band");
    }
}

json complex_json(cdouble v) { return json::array({v.real(), v.imag()}); }

json config_json(const ScenarioConfig& c) {
    json j;
    j["name"] = c.name;
    if (!c.description.empty()) j["description"] = c.description;
    j["sample_rate_hz"] = c.sample_rate_hz;
    j["duration_s"] = c.duration_s;
    j["seed"] = c.seed;
    json w;
    switch (c.waveform.kind) {
        case WaveformKind::bandlimited_noise: w["kind"] = "bandlimited_noise"; break;
        case WaveformKind::two_tone: w["kind"] = "two_tone"; break;
        case WaveformKind::soi: w["kind"] = "soi"; break;
    }
    if (c.waveform.kind == WaveformKind::two_tone)
        w["tone_spacing_hz"] = c.waveform.tone_spacing_hz;
    else
        w["bandwidth_hz"] = c.waveform.bandwidth_hz;
    w["power_dbm"] = c.waveform.power_dbm;
    j["waveform"] = w;
    json pa;
    pa["gain_db"] = c.pa.gain_db;
    pa["a3"] = complex_json(c.pa.a3);
    pa["a5"] = complex_json(c.pa.a5);
    pa["lo_leakage_dbc"] = c.pa.lo_leakage_dbc ? json(*c.pa.lo_leakage_dbc) : json(nullptr);
    j["pa"] = pa;
    json ch;
    json taps = json::array();
    for (const auto& t : c.channel.taps)
        taps.push_back({{"delay_s", t.delay_s},
                        {"gain_db", t.gain_db},
                        {"phase_rad", t.phase_rad}});
    ch["taps"] = taps;
    ch["noise_floor_dbm"] = std::isfinite(c.channel.noise_floor_dbm)
                                ? json(c.channel.noise_floor_dbm)
                                : json(nullptr);
    if (!c.channel.events.empty()) {
        json evs = json::array();
        for (const auto& e : c.channel.events) {
            json ev;
            ev["time_s"] = e.time_s;
            ev["tap_index"] = e.tap_index;
            ev["kind"] = e.kind == DisturbanceEvent::Kind::step ? "step" : "ramp";
            ev["new_gain_db"] = e.new_gain_db;
            ev["new_phase_rad"] = e.new_phase_rad;
            if (e.kind == DisturbanceEvent::Kind::ramp)
                ev["ramp_duration_s"] = e.ramp_duration_s;
            evs.push_back(ev);
        }
        ch["events"] = evs;
    }
    j["channel"] = ch;
    json can;
    can["tap_delays_s"] = c.canceller.tap_delays_s;
    can["weight_cap"] = c.canceller.weight_cap ? json(*c.canceller.weight_cap) : json(nullptr);
    j["canceller"] = can;
    json lms;
    lms["mu"] = c.lms.mu;
    lms["integrator_dc_gain_db"] = std::isfinite(c.lms.integrator_dc_gain_db)
                                       ? json(c.lms.integrator_dc_gain_db)
                                       : json(nullptr);
    if (!c.branches.empty()) {
        json bs = json::array();
        for (const auto& b : c.branches) {
            json bj;
            bj["mode"] = b.mode == BranchMode::adaptive ? "adaptive" : "manual";
            if (b.manual_weight) bj["weight"] = complex_json(*b.manual_weight);
            bs.push_back(bj);
        }
        lms["branches"] = bs;
    }
    if (!c.lms.dc_offset_i.empty()) lms["dc_offset_i"] = c.lms.dc_offset_i;
    if (!c.lms.dc_offset_q.empty()) lms["dc_offset_q"] = c.lms.dc_offset_q;
    if (!c.lms.nulling_offset_i.empty()) lms["nulling_offset_i"] = c.lms.nulling_offset_i;
    if (!c.lms.nulling_offset_q.empty()) lms["nulling_offset_q"] = c.lms.nulling_offset_q;
    lms["trace_decim"] = c.lms.trace_decim;
    lms["residual_window"] = c.lms.residual_window;
    j["lms"] = lms;
    j["soi"] = c.soi ? json{{"bandwidth_hz", c.soi->bandwidth_hz},
                            {"power_dbm", c.soi->power_dbm}}
                     : json(nullptr);
    const auto band = c.si_band_hz ? *c.si_band_hz : default_band(c.waveform);
    j["si_band_hz"] = json::array({band.first, band.second});
    j["outputs"] = {{"report", c.outputs.report},
                    {"psd", c.outputs.psd},
                    {"weight_trace", c.outputs.weight_trace}};
    return j;
}

PsdEstimate steady_psd(const ComplexSignal& s) {
    const std::size_t first = s.size() / 2;
    ComplexSignal half;
    half.sample_rate_hz = s.sample_rate_hz;
    half.start_time_s = s.start_time_s + static_cast<double>(first) * s.dt();
    half.samples.assign(s.samples.begin() + static_cast<std::ptrdiff_t>(first),
                        s.samples.end());
    return psd_welch(half, std::min<std::size_t>(kDefaultSegLen, half.size()));
}

void write_psd_csv(const std::string& path, const PsdEstimate& psd) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "freq_hz,psd_dbm_per_hz\n";
    char line[96];
    for (std::size_t i = 0; i < psd.freqs_hz.size(); ++i) {
        std::snprintf(line, sizeof line, "%.10g,%.10g\n", psd.freqs_hz[i],
                      psd.psd_dbm_per_hz[i]);
        f << line;
    }
}

void write_trace_csv(const std::string& path, const LmsTrace& trace) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "time_s";
    for (std::size_t b = 0; b < trace.weights.size(); ++b)
        f << ",w" << b << "_i,w" << b << "_q";
    f << ",residual_dbm\n";
    char buf[64];
    for (std::size_t i = 0; i < trace.times_s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g", trace.times_s[i]);
        f << buf;
        for (const auto& wb : trace.weights) {
            std::snprintf(buf, sizeof buf, ",%.12g,%.12g", wb[i].real(), wb[i].imag());
            f << buf;
        }
        std::snprintf(buf, sizeof buf, ",%.10g\n", trace.residual_power_dbm[i]);
        f << buf;
    }
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

ScenarioConfig make_base(std::string name, std::string desc) {
    ScenarioConfig c;
    c.name = std::move(name);
    c.description = std::move(desc);
    c.channel = preset(ChannelPreset::circulator);
    return c;
}

}  // namespace

std::vector<ScenarioInfo> bundled_scenarios() {
    return {
        {"circulator_20mhz",
         "Shared-antenna (circulator) coupling, 20 MHz waveform; branch 1 adaptive, "
         "branch 2 manual at the least-squares optimum"},
        {"circulator_100mhz",
         "Shared-antenna (circulator) coupling, 100 MHz waveform; mixed adaptive/manual "
         "branches"},
        {"dual_antenna_20mhz",
         "Dual-antenna coupling (30 cm separation), 20 MHz waveform; mixed "
         "adaptive/manual branches"},
        {"dual_antenna_100mhz",
         "Dual-antenna coupling (30 cm separation), 100 MHz waveform; mixed "
         "adaptive/manual branches"},
        {"soi_recovery",
         "Circulator coupling with a narrowband -50 dBm signal of interest buried "
         "under the self-interference; fully adaptive"},
        {"tracking_step",
         "Circulator coupling; antenna-reflection phase flips by pi mid-run, the "
         "fully adaptive loop re-converges"},
        {"tracking_ramp",
         "Circulator coupling; antenna reflection drifts in gain and phase over "
         "0.5 ms, the fully adaptive loop tracks it"},
        {"pa_two_tone",
         "Two-tone PA drive at 0 dBm composite input; inspect psd_tx.csv for the "
         "intermodulation spectrum"},
    };
}

ScenarioConfig bundled_scenario(const std::string& name) {
    const auto mixed_branches = [] {
        return std::vector<BranchSpec>{{BranchMode::adaptive, std::nullopt},
                                       {BranchMode::manual, std::nullopt}};
    };
    if (name == "circulator_20mhz") {
        ScenarioConfig c = make_base(name, bundled_scenarios()[0].description);
        c.branches = mixed_branches();
        return c;
    }
    if (name == "circulator_100mhz") {
        ScenarioConfig c = make_base(name, bundled_scenarios()[1].description);
        c.waveform.bandwidth_hz = 100e6;
        c.branches = mixed_branches();
        return c;
    }
    if (name == "dual_antenna_20mhz") {
        ScenarioConfig c = make_base(name, bundled_scenarios()[2].description);
        c.channel = preset(ChannelPreset::dual_antenna);
        c.branches = mixed_branches();
        return c;
    }
    if (name == "dual_antenna_100mhz") {
        ScenarioConfig c = make_base(name, bundled_scenarios()[3].description);
        c.channel = preset(ChannelPreset::dual_antenna);
        c.waveform.bandwidth_hz = 100e6;
        c.branches = mixed_branches();
        return c;
    }
    if (name == "soi_recovery") {
        ScenarioConfig c = make_base(name, bundled_scenarios()[4].description);
        c.soi = SoiSpec{2e6, -50.0};
        // The adaptation loop corner (mu * reference power / 2*pi) must sit
        // well below the signal-of-interest band, otherwise the weight wander
        // tracks and partially cancels the incoming signal along with the
        // self-interference. 2e3 puts the corner near 44 kHz against a
        // +/-1 MHz signal while still converging within a couple of ms.
        c.lms.mu = 2e3;
        return c;
    }
    if (name == "tracking_step") {
        ScenarioConfig c = make_base(name, bundled_scenarios()[5].description);
        c.duration_s = 4e-3;
        // Slower adaptation keeps the re-convergence transient well resolved
        // against the trailing residual-measurement window.
        c.lms.mu = kDefaultMu / 2.0;
        DisturbanceEvent e;
        e.time_s = 1e-3;
        e.tap_index = 1;
        e.kind = DisturbanceEvent::Kind::step;
        e.new_gain_db = -20.0;
        e.new_phase_rad = kCirculatorReflectionPhase + std::numbers::pi;
        c.channel.events.push_back(e);
        return c;
    }
    if (name == "tracking_ramp") {
        ScenarioConfig c = make_base(name, bundled_scenarios()[6].description);
        c.duration_s = 4e-3;
        c.lms.mu = kDefaultMu / 2.0;
        DisturbanceEvent e;
        e.time_s = 1e-3;
        e.tap_index = 1;
        e.kind = DisturbanceEvent::Kind::ramp;
        e.new_gain_db = -23.0;
        e.new_phase_rad = kCirculatorReflectionPhase + std::numbers::pi / 2.0;
        e.ramp_duration_s = 0.5e-3;
        c.channel.events.push_back(e);
        return c;
    }
    if (name == "pa_two_tone") {
        ScenarioConfig c = make_base(name, bundled_scenarios()[7].description);
        c.duration_s = 2e-3;
        c.waveform.kind = WaveformKind::two_tone;
        c.waveform.tone_spacing_hz = 10e6;
        c.si_band_hz = {{-25e6, 25e6}};
        return c;
    }
    throw ConfigError("unknown scenario \"" + name + "\"");
}

ScenarioConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("invalid JSON: expected an object");

    ScenarioConfig c;
    c.name = require(j, "name", "").get<std::string>();
    if (j.contains("description") && !j["description"].is_null())
        c.description = j["description"].get<std::string>();
    c.sample_rate_hz = req_num(j, "sample_rate_hz", "");
    c.duration_s = req_num(j, "duration_s", "");
    c.seed = j.contains("seed") && !j["seed"].is_null() ? req_uint(j, "seed", "") : 1;
    c.waveform = parse_waveform(require(j, "waveform", ""));
    if (j.contains("pa") && !j["pa"].is_null()) c.pa = parse_pa(j["pa"]);
    c.channel = parse_channel(require(j, "channel", ""));
    if (j.contains("canceller") && !j["canceller"].is_null())
        c.canceller = parse_canceller(j["canceller"]);
    if (j.contains("lms") && !j["lms"].is_null()) parse_lms(j["lms"], c.lms, c.branches);
    if (j.contains("soi") && !j["soi"].is_null()) {
        SoiSpec s;
        s.bandwidth_hz = req_num(j["soi"], "bandwidth_hz", "soi");
        s.power_dbm = req_num(j["soi"], "power_dbm", "soi");
        c.soi = s;
    }
    if (j.contains("si_band_hz") && !j["si_band_hz"].is_null()) {
        const auto band = get_num_array(j["si_band_hz"], "si_band_hz");
        if (band.size() != 2) invalid("si_band_hz", "expected [f_lo, f_hi]");
        c.si_band_hz = {{band[0], band[1]}};
    }
    if (j.contains("outputs") && !j["outputs"].is_null()) {
        const json& o = j["outputs"];
        auto flag = [&](const char* key, bool dflt) {
            if (!o.contains(key) || o[key].is_null()) return dflt;
            if (!o[key].is_boolean()) invalid(std::string("outputs.") + key, "expected a boolean");
            return o[key].get<bool>();
        };
        c.outputs.report = flag("report", true);
        c.outputs.psd = flag("psd", true);
        c.outputs.weight_trace = flag("weight_trace", true);
    }
    validate_config(c);
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

std::string config_to_json(const ScenarioConfig& cfg) {
    return config_json(cfg).dump(2) + "\n";
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    validate_config(cfg);

    // The transmit record carries a tail guard past the nominal duration so
    // the delay interpolators in the channel and canceller never read zeros
    // beyond the signal edge. The received record is trimmed back to the
    // nominal length; the reference keeps its guard for the canceller taps.
    const std::size_t n = static_cast<std::size_t>(
        std::llround(cfg.duration_s * cfg.sample_rate_hz));
    if (n == 0) throw ConfigError("invalid field: duration_s (too short)");

    WaveformSpec wf = cfg.waveform;
    wf.duration_s =
        static_cast<double>(n + kDelayFilterLength) / cfg.sample_rate_hz;
    wf.seed = cfg.seed;
    ComplexSignal x_ref;
    {
        ComplexSignal x0 = generate(wf, cfg.sample_rate_hz);
        x_ref = amplify(x0, cfg.pa);
    }

    ComplexSignal y = propagate(cfg.channel, x_ref, cfg.seed + 2);
    y.samples.resize(n);
    std::optional<ComplexSignal> soi;
    if (cfg.soi) {
        WaveformSpec ss;
        ss.kind = WaveformKind::soi;
        ss.bandwidth_hz = cfg.soi->bandwidth_hz;
        ss.power_dbm = cfg.soi->power_dbm;
        ss.duration_s = static_cast<double>(n) / cfg.sample_rate_hz;
        ss.seed = cfg.seed + 1;
        soi = generate(ss, cfg.sample_rate_hz);
        for (std::size_t i = 0; i < n; ++i) y.samples[i] += soi->samples[i];
    }

    LmsConfig lms = cfg.lms;
    CancellerWeights w0{std::vector<cdouble>(cfg.canceller.n_taps(), cdouble{0.0, 0.0})};
    if (!cfg.branches.empty()) {
        lms.modes.clear();
        bool need_ls = false;
        for (const auto& b : cfg.branches) {
            lms.modes.push_back(b.mode);
            if (b.mode == BranchMode::manual && !b.manual_weight) need_ls = true;
        }
        CancellerWeights ls;
        if (need_ls) {
            ComplexSignal x_w = x_ref;
            x_w.samples.resize(n);
            ls = wiener_solution(x_w, y, cfg.canceller);
        }
        for (std::size_t b = 0; b < cfg.branches.size(); ++b) {
            if (cfg.branches[b].mode != BranchMode::manual) continue;
            w0.w[b] = cfg.branches[b].manual_weight ? *cfg.branches[b].manual_weight
                                                    : ls.w[b];
        }
    }

    ClosedLoopResult loop = run_closed_loop_prepared(y, x_ref, cfg.canceller, lms, w0);
    x_ref.samples.resize(n);  // reporting below uses the nominal record only

    const auto band = cfg.si_band_hz ? *cfg.si_band_hz : default_band(cfg.waveform);
    ScenarioResult res;
    res.config = cfg;
    res.cancellation =
        cancellation_report(x_ref, y, loop.z, band.first, band.second);
    res.convergence_time_s = convergence_time(loop.trace);
    res.final_weights = loop.final_weights.w;
    res.trace = std::move(loop.trace);
    if (soi)
        res.soi = soi_fidelity(*soi, loop.z, -cfg.soi->bandwidth_hz / 2.0,
                               cfg.soi->bandwidth_hz / 2.0);
    res.psd_tx = steady_psd(x_ref);
    res.psd_y = steady_psd(y);
    res.psd_z = steady_psd(loop.z);
    if (soi) res.psd_soi = steady_psd(*soi);
    return res;
}

std::string report_to_json(const ScenarioResult& r) {
    json j;
    j["name"] = r.config.name;
    j["version"] = kVersion;
    j["seed"] = r.config.seed;
    j["band_hz"] = json::array({r.cancellation.f_lo_hz, r.cancellation.f_hi_hz});
    j["p_tx_dbm"] = finite_or_null(r.cancellation.p_tx_dbm);
    j["p_y_dbm"] = finite_or_null(r.cancellation.p_y_dbm);
    j["p_z_dbm"] = finite_or_null(r.cancellation.p_z_dbm);
    j["intrinsic_db"] = finite_or_null(r.cancellation.intrinsic_db);
    j["active_db"] = finite_or_null(r.cancellation.active_db);
    j["total_db"] = finite_or_null(r.cancellation.total_db);
    j["convergence_time_s"] = finite_or_null(r.convergence_time_s);
    json ws = json::array();
    for (const auto& w : r.final_weights) ws.push_back(complex_json(w));
    j["final_weights"] = ws;
    j["soi_fidelity"] =
        r.soi ? json{{"power_delta_db", finite_or_null(r.soi->power_delta_db)},
                     {"evm_db", finite_or_null(r.soi->evm_db)}}
              : json(nullptr);
    j["config"] = config_json(r.config);
    return j.dump(2) + "\n";
}

std::vector<std::string> write_outputs(const ScenarioResult& r,
                                       const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    auto path = [&](const char* f) { return (fs::path(out_dir) / f).string(); };

    if (r.config.outputs.report) {
        const std::string p = path("report.json");
        std::ofstream f(p);
        if (!f) throw std::runtime_error("cannot write " + p);
        f << report_to_json(r);
        written.push_back(p);
    }
    if (r.config.outputs.psd) {
        write_psd_csv(path("psd_tx.csv"), r.psd_tx);
        write_psd_csv(path("psd_y.csv"), r.psd_y);
        write_psd_csv(path("psd_z.csv"), r.psd_z);
        written.push_back(path("psd_tx.csv"));
        written.push_back(path("psd_y.csv"));
        written.push_back(path("psd_z.csv"));
        if (r.psd_soi) {
            write_psd_csv(path("psd_soi.csv"), *r.psd_soi);
            written.push_back(path("psd_soi.csv"));
        }
    }
    if (r.config.outputs.weight_trace) {
        write_trace_csv(path("trace.csv"), r.trace);
        written.push_back(path("trace.csv"));
    }
    return written;
}

}  // namespace sicsim
