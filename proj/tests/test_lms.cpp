#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "sicsim/channel.hpp"
#include "sicsim/lms.hpp"
#include "sicsim/waveform.hpp"
#include "test_util.hpp"

using namespace sicsim;
using testutil::check_close;
using testutil::tone;
using testutil::white_noise;

namespace {

LmsConfig no_leak(double mu = kDefaultMu) {
    LmsConfig cfg;
    cfg.mu = mu;
    cfg.integrator_dc_gain_db = std::numeric_limits<double>::infinity();
    return cfg;
}

}  // namespace

TEST_SUITE("lms") {

TEST_CASE("single update integrates conj(x)*z") {
    // w=0, x=(1,0), z=(0,1), mu*dt = 0.1:
    //   dw_I = mu*dt*(x_I z_I + x_Q z_Q) = 0
    //   dw_Q = mu*dt*(x_I z_Q - x_Q z_I) = 0.1
    LmsConfig cfg = no_leak(100.0);
    CancellerWeights w{{{0.0, 0.0}}};
    const auto w1 = lms_step(w, {{1.0, 0.0}}, {0.0, 1.0}, 1e-3, cfg);
    check_close(w1.w[0].real(), 0.0, 1e-15);
    check_close(w1.w[0].imag(), 0.1, 1e-15);
}

TEST_CASE("I/Q update equals the complex correlator form") {
    LmsConfig cfg = no_leak(3.7e4);
    std::mt19937_64 rng(21);
    std::normal_distribution<double> nd;
    const double dt = 2e-9;
    for (int k = 0; k < 1000; ++k) {
        CancellerWeights w{{{nd(rng), nd(rng)}, {nd(rng), nd(rng)}}};
        const std::vector<cdouble> x{{nd(rng), nd(rng)}, {nd(rng), nd(rng)}};
        const cdouble z{nd(rng), nd(rng)};
        const auto got = lms_step(w, x, z, dt, cfg);
        for (std::size_t b = 0; b < 2; ++b) {
            const cdouble want = w.w[b] + cfg.mu * dt * std::conj(x[b]) * z;
            CHECK(std::abs(got.w[b] - want) <= 1e-12 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("zero reference or zero residual holds the weights") {
    LmsConfig cfg = no_leak();
    CancellerWeights w{{{0.25, -0.5}}};
    auto w1 = lms_step(w, {{0.0, 0.0}}, {1.0, 1.0}, 2e-9, cfg);
    CHECK(w1.w[0] == w.w[0]);
    w1 = lms_step(w, {{1.0, 2.0}}, {0.0, 0.0}, 2e-9, cfg);
    CHECK(w1.w[0] == w.w[0]);
}

TEST_CASE("finite integrator gain leaks the weights toward zero") {
    LmsConfig cfg;
    cfg.mu = 1e5;
    cfg.integrator_dc_gain_db = 40.0;
    CancellerWeights w{{{1.0, 0.0}}};
    const auto w1 = lms_step(w, {{0.0, 0.0}}, {0.0, 0.0}, 2e-9, cfg);
    const double lambda = 1.0 - 1e5 * 2e-9 / amplitude_from_db(40.0);
    check_close(w1.w[0].real(), lambda, 1e-15);
}

TEST_CASE("manual branches hold their weight") {
    LmsConfig cfg = no_leak();
    cfg.modes = {BranchMode::adaptive, BranchMode::manual};
    CancellerWeights w{{{0.0, 0.0}, {0.123, -0.456}}};
    const auto w1 = lms_step(w, {{1.0, 0.0}, {1.0, 0.0}}, {1.0, 0.0}, 2e-9, cfg);
    CHECK(w1.w[0] != w.w[0]);
    CHECK(w1.w[1] == w.w[1]);
}

TEST_CASE("correlator offsets integrate; matched nulling cancels them bit-exactly") {
    LmsConfig cfg = no_leak(100.0);
    cfg.dc_offset_i = {0.25};
    cfg.dc_offset_q = {-0.5};
    CancellerWeights w{{{0.0, 0.0}}};
    // x = z = 0, so only the offsets drive the integrator
    const auto w1 = lms_step(w, {{0.0, 0.0}}, {0.0, 0.0}, 1e-3, cfg);
    check_close(w1.w[0].real(), 100.0 * 1e-3 * 0.25, 1e-15);
    check_close(w1.w[0].imag(), 100.0 * 1e-3 * -0.5, 1e-15);

    cfg.nulling_offset_i = {-0.25};
    cfg.nulling_offset_q = {0.5};
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    LmsConfig clean = no_leak(100.0);
    for (int k = 0; k < 50; ++k) {
        const std::vector<cdouble> x{{nd(rng), nd(rng)}};
        const cdouble z{nd(rng), nd(rng)};
        const auto nulled = lms_step(w, x, z, 1e-3, cfg);
        const auto ref = lms_step(w, x, z, 1e-3, clean);
        CHECK(nulled.w[0] == ref.w[0]);  // bit-exact offset cancellation
        w = nulled;
    }
}

TEST_CASE("closed loop approaches the least-squares solution on a matched channel") {
    SiChannel ch;
    ch.taps = {{5e-9, -20.0, 1.1}};
    ch.noise_floor_dbm = kNegInfDb;
    CancellerConfig cc;
    cc.tap_delays_s = {5e-9};

    WaveformSpec wf;
    wf.bandwidth_hz = 20e6;
    wf.duration_s = 0.4e-3;
    wf.seed = 12;
    const auto x = generate(wf, 500e6);
    const auto y = propagate(ch, x, 1);

    LmsConfig cfg = no_leak();
    CancellerWeights w0{{{0.0, 0.0}}};
    const auto res = run_closed_loop_prepared(y, x, cc, cfg, w0);
    const auto ls = wiener_solution(x, y, cc);

    const cdouble g = std::polar(amplitude_from_db(-20.0), 1.1);
    CHECK(std::abs(ls.w[0] - g) < 1e-6);
    CHECK(std::abs(res.final_weights.w[0] - g) / std::abs(g) < 0.01);
}

TEST_CASE("leak bias grows as the integrator gain shrinks") {
    SiChannel ch;
    ch.taps = {{5e-9, -20.0, 1.1}};
    ch.noise_floor_dbm = kNegInfDb;
    CancellerConfig cc;
    cc.tap_delays_s = {5e-9};
    WaveformSpec wf;
    wf.bandwidth_hz = 20e6;
    wf.duration_s = 0.2e-3;
    wf.seed = 13;
    const auto x = generate(wf, 500e6);
    const auto y = propagate(ch, x, 1);
    const cdouble g = std::polar(amplitude_from_db(-20.0), 1.1);

    auto err_for_gain = [&](double gain_db) {
        LmsConfig cfg;
        cfg.integrator_dc_gain_db = gain_db;
        CancellerWeights w0{{{0.0, 0.0}}};
        const auto res = run_closed_loop_prepared(y, x, cc, cfg, w0);
        return std::abs(res.final_weights.w[0] - g);
    };
    const double e10 = err_for_gain(10.0);
    const double e30 = err_for_gain(30.0);
    const double e_inf = err_for_gain(std::numeric_limits<double>::infinity());
    CHECK(e10 > 3.0 * e30);
    CHECK(e30 > e_inf);
}

TEST_CASE("weight cap limits the weight magnitude") {
    SiChannel ch;
    ch.taps = {{5e-9, 0.0, 0.0}};  // strong leakage wants |w| near 1
    ch.noise_floor_dbm = kNegInfDb;
    CancellerConfig cc;
    cc.tap_delays_s = {5e-9};
    cc.weight_cap = 0.25;
    WaveformSpec wf;
    wf.duration_s = 0.1e-3;
    wf.seed = 14;
    const auto x = generate(wf, 500e6);
    const auto y = propagate(ch, x, 1);
    const auto res = run_closed_loop_prepared(y, x, cc, no_leak(), {{{0.0, 0.0}}});
    CHECK(std::abs(res.final_weights.w[0]) <= 0.25 + 1e-12);
    for (const auto& per_branch : res.trace.weights)
        for (const auto& w : per_branch) CHECK(std::abs(w) <= 0.25 + 1e-9);
}

TEST_CASE("an unstable step size diverges with a clear error") {
    const auto ch = preset(ChannelPreset::circulator);
    WaveformSpec wf;
    wf.power_dbm = 21.0;  // reference power straight at the canceller
    wf.duration_s = 0.05e-3;
    wf.seed = 15;
    const auto x = generate(wf, 500e6);
    const auto y = propagate(ch, x, 1);
    LmsConfig cfg = no_leak(1e7);  // far above the stability bound
    CancellerWeights w0{{{0.0, 0.0}, {0.0, 0.0}}};
    CHECK_THROWS_WITH(run_closed_loop_prepared(y, x, CancellerConfig{}, cfg, w0),
                      "LMS diverged (reduce mu)");
}

TEST_CASE("trace timing and decimation") {
    const auto x = white_noise(10000, 0.0, 16);
    auto y = x;
    LmsConfig cfg = no_leak();
    cfg.trace_decim = 1000;
    cfg.residual_window = 500;
    CancellerWeights w0{{{0.0, 0.0}, {0.0, 0.0}}};
    const auto res = run_closed_loop_prepared(y, x, CancellerConfig{}, cfg, w0);
    REQUIRE(res.trace.times_s.size() == 10);
    check_close(res.trace.times_s[0], 999.0 / 500e6, 1e-15);
    CHECK(res.trace.weights.size() == 2);
    CHECK(res.trace.weights[0].size() == 10);
    CHECK(res.trace.residual_power_dbm.size() == 10);
}

TEST_CASE("reference with a tail guard yields an identical prefix") {
    SiChannel ch;
    ch.taps = {{5e-9, -20.0, 0.5}};
    ch.noise_floor_dbm = kNegInfDb;
    CancellerConfig cc;
    cc.tap_delays_s = {5e-9};
    WaveformSpec wf;
    wf.duration_s = 0.05e-3;
    wf.seed = 17;
    const auto x_full = generate(wf, 500e6);
    auto x_trim = x_full;
    const std::size_t n = x_full.size() - 200;
    x_trim.samples.resize(n);
    auto y = propagate(ch, x_full, 1);
    y.samples.resize(n);

    const auto a = run_closed_loop_prepared(y, x_full, cc, no_leak(), {{{0.0, 0.0}}});
    const auto b = run_closed_loop_prepared(y, x_trim, cc, no_leak(), {{{0.0, 0.0}}});
    // identical until the truncated reference's delay edge enters the taps
    for (std::size_t i = 0; i + 200 < n; ++i)
        CHECK(a.z.samples[i] == b.z.samples[i]);
}

TEST_CASE("least-squares oracle input validation") {
    CancellerConfig cc;
    const auto x_short = white_noise(300, 0.0, 18);
    auto y_short = x_short;
    CHECK_THROWS_WITH(wiener_solution(x_short, y_short, cc), "record too short");

    // a single complex exponential cannot distinguish two delays
    const auto x_tone = tone(1u << 14, 20e6, 1.0);
    auto y_tone = x_tone;
    CHECK_THROWS_WITH(wiener_solution(x_tone, y_tone, cc),
                      "ill-conditioned reference covariance");
}

TEST_CASE("closed-loop argument validation") {
    const auto x = white_noise(8192, 0.0, 19);
    auto y = x;
    CancellerConfig cc;
    LmsConfig cfg = no_leak();
    CancellerWeights bad{{{0.0, 0.0}}};
    CHECK_THROWS_WITH(run_closed_loop_prepared(y, x, cc, cfg, bad),
                      "initial weight count mismatch");
    CancellerWeights w0{{{0.0, 0.0}, {0.0, 0.0}}};
    auto x_short = x;
    x_short.samples.resize(100);
    CHECK_THROWS_WITH(run_closed_loop_prepared(y, x_short, cc, cfg, w0),
                      "signal length mismatch");
    LmsConfig bad_mu = cfg;
    bad_mu.mu = 0.0;
    CHECK_THROWS_WITH(run_closed_loop_prepared(y, x, cc, bad_mu, w0),
                      "mu must be positive");
}

}  // TEST_SUITE
