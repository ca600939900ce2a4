#include <doctest.h>

#include <cmath>
#include <complex>

#include "sicsim/spectral.hpp"
#include "sicsim/waveform.hpp"
#include "test_util.hpp"

using namespace sicsim;
using testutil::check_close;

namespace {

WaveformSpec noise_spec(double bw_hz, double power_dbm, std::uint64_t seed,
                        double duration_s = 0.2e-3) {
    WaveformSpec w;
    w.kind = WaveformKind::bandlimited_noise;
    w.bandwidth_hz = bw_hz;
    w.power_dbm = power_dbm;
    w.duration_s = duration_s;
    w.seed = seed;
    return w;
}

}  // namespace

TEST_SUITE("waveform") {

TEST_CASE("output power is normalized exactly") {
    for (double p : {-50.0, -10.0, 0.0, 10.0}) {
        CAPTURE(p);
        auto w = noise_spec(20e6, p, 3);
        check_close(power_dbm(generate(w, 500e6)), p, 1e-9);
        WaveformSpec t;
        t.kind = WaveformKind::two_tone;
        t.power_dbm = p;
        t.duration_s = 0.2e-3;
        check_close(power_dbm(generate(t, 500e6)), p, 1e-9);
    }
}

TEST_CASE("generation is deterministic per seed") {
    const auto a = generate(noise_spec(20e6, 0.0, 77), 500e6);
    const auto b = generate(noise_spec(20e6, 0.0, 77), 500e6);
    const auto c = generate(noise_spec(20e6, 0.0, 78), 500e6);
    REQUIRE(a.size() == b.size());
    bool same = true, differ = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.samples[i] != b.samples[i]) same = false;
        if (a.samples[i] != c.samples[i]) differ = true;
    }
    CHECK(same);
    CHECK(differ);
}

TEST_CASE("different seeds decorrelate") {
    const auto a = generate(noise_spec(20e6, 0.0, 1), 500e6);
    const auto b = generate(noise_spec(20e6, 0.0, 2), 500e6);
    cdouble acc{0.0, 0.0};
    double pa = 0.0, pb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a.samples[i] * std::conj(b.samples[i]);
        pa += std::norm(a.samples[i]);
        pb += std::norm(b.samples[i]);
    }
    CHECK(std::abs(acc) / std::sqrt(pa * pb) < 0.05);
}

TEST_CASE("noise stays inside its bandwidth") {
    // 16384-point segments resolve the 2%-of-bandwidth transition edge.
    const auto s = generate(noise_spec(20e6, 0.0, 5, 0.5e-3), 500e6);
    const auto psd = psd_welch(s, 16384);
    const double in_band = psd.integrate_dbm(-10e6, 10e6);
    check_close(in_band, 0.0, 0.1);
    const double out_mw =
        mw_from_dbm(psd.total_power_dbm()) - mw_from_dbm(in_band);
    CHECK(dbm_from_mw(std::max(out_mw, 0.0)) < -50.0);
}

TEST_CASE("two-tone places -3.01 dBm lines at +/- spacing/2") {
    WaveformSpec t;
    t.kind = WaveformKind::two_tone;
    t.tone_spacing_hz = 10e6;
    t.power_dbm = 0.0;
    t.duration_s = 0.5e-3;
    const auto s = generate(t, 500e6);
    const auto psd = psd_welch(s, 16384);
    check_close(psd.line_power_dbm(5e6, 1e6), -3.0103, 0.1);
    check_close(psd.line_power_dbm(-5e6, 1e6), -3.0103, 0.1);
    CHECK(psd.line_power_dbm(0.0, 1e6) < -40.0);   // no carrier
    CHECK(psd.line_power_dbm(15e6, 1e6) < -40.0);  // no intermodulation
}

TEST_CASE("two-tone ignores the seed") {
    auto t = noise_spec(20e6, 0.0, 1);
    t.kind = WaveformKind::two_tone;
    t.tone_spacing_hz = 10e6;
    auto t2 = t;
    t2.seed = 999;
    const auto a = generate(t, 500e6);
    const auto b = generate(t2, 500e6);
    for (std::size_t i = 0; i < a.size(); i += 17)
        CHECK(a.samples[i] == b.samples[i]);
}

TEST_CASE("narrowband signal of interest is contained in its band") {
    WaveformSpec w;
    w.kind = WaveformKind::soi;
    w.bandwidth_hz = 2e6;
    w.power_dbm = -50.0;
    w.duration_s = 0.5e-3;
    w.seed = 2;
    const auto s = generate(w, 500e6);
    check_close(power_dbm(s), -50.0, 1e-9);
    const auto psd = psd_welch(s, 16384);
    check_close(psd.integrate_dbm(-1e6, 1e6), -50.0, 0.1);
}

TEST_CASE("invalid specs throw") {
    auto w = noise_spec(600e6, 0.0, 1);
    CHECK_THROWS_WITH(generate(w, 500e6), "bandwidth exceeds sample rate");
    w = noise_spec(-5.0, 0.0, 1);
    CHECK_THROWS_WITH(generate(w, 500e6), "invalid bandwidth");
    w = noise_spec(20e6, 0.0, 1, -1.0);
    CHECK_THROWS_WITH(generate(w, 500e6), "invalid duration");
    WaveformSpec t;
    t.kind = WaveformKind::two_tone;
    t.tone_spacing_hz = 600e6;
    CHECK_THROWS_WITH(generate(t, 500e6), "tone spacing exceeds sample rate");
    t.tone_spacing_hz = 0.0;
    CHECK_THROWS_WITH(generate(t, 500e6), "invalid tone spacing");
}

}  // TEST_SUITE
