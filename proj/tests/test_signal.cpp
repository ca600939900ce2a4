#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "sicsim/signal.hpp"
#include "test_util.hpp"

using namespace sicsim;
using testutil::check_close;

namespace {

ComplexSignal constant(std::size_t n, cdouble v, double rate = 500e6) {
    ComplexSignal s;
    s.sample_rate_hz = rate;
    s.samples.assign(n, v);
    return s;
}

}  // namespace

TEST_SUITE("signal") {

TEST_CASE("dbm/mw conversions") {
    CHECK(dbm_from_mw(1.0) == 0.0);
    CHECK(dbm_from_mw(0.0) == kNegInfDb);
    CHECK(mw_from_dbm(kNegInfDb) == 0.0);
    check_close(dbm_from_mw(2.0), 3.0102999566398120, 1e-12);
    check_close(mw_from_dbm(-30.0), 1e-3, 1e-15);
    check_close(amplitude_from_db(20.0), 10.0, 1e-12);
    CHECK(amplitude_from_db(0.0) == 1.0);
    for (double p : {-97.3, -12.0, 0.0, 18.42})
        check_close(dbm_from_mw(mw_from_dbm(p)), p, 1e-10);
}

TEST_CASE("unit-magnitude sample is 0 dBm") {
    const auto s = constant(1000, {1.0, 0.0});
    CHECK(mean_power_mw(s) == 1.0);
    CHECK(power_dbm(s) == 0.0);
}

TEST_CASE("power of a sqrt(2)-magnitude constant is 3.01 dBm") {
    const auto s = constant(1000, {1.0, 1.0});
    check_close(power_dbm(s), 3.0102999566398120, 1e-12);
}

TEST_CASE("all-zero signal reports -inf dBm") {
    const auto s = constant(64, {0.0, 0.0});
    CHECK(power_dbm(s) == kNegInfDb);
}

TEST_CASE("empty signal throws") {
    ComplexSignal s;
    s.sample_rate_hz = 1e6;
    CHECK_THROWS_WITH(mean_power_mw(s), "empty signal");
}

TEST_CASE("power is invariant under a constant phase rotation") {
    ComplexSignal s = constant(4096, {0.0, 0.0});
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (auto& v : s.samples) v = {nd(rng), nd(rng)};
    const double p0 = power_dbm(s);
    const cdouble rot = std::polar(1.0, 1.234);
    for (auto& v : s.samples) v *= rot;
    check_close(power_dbm(s), p0, 1e-11);
}

TEST_CASE("noise floor lands at the requested level") {
    auto s = constant(1u << 20, {0.0, 0.0});
    add_noise_floor_inplace(s, -90.0, 42);
    check_close(power_dbm(s), -90.0, 0.1);
    CHECK(all_finite(s));
}

TEST_CASE("noise is deterministic per seed") {
    const auto base = constant(4096, {0.5, -0.25});
    const auto a = add_noise_floor(base, -40.0, 9);
    const auto b = add_noise_floor(base, -40.0, 9);
    const auto c = add_noise_floor(base, -40.0, 10);
    REQUIRE(a.size() == b.size());
    bool identical = true, differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.samples[i] != b.samples[i]) identical = false;
        if (a.samples[i] != c.samples[i]) differs = true;
    }
    CHECK(identical);
    CHECK(differs);
}

TEST_CASE("-inf noise floor leaves the signal untouched") {
    const auto base = constant(256, {0.25, 1.0});
    const auto out = add_noise_floor(base, kNegInfDb, 3);
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(out.samples[i] == base.samples[i]);
}

TEST_CASE("all_finite detects a NaN") {
    auto s = constant(16, {1.0, 0.0});
    CHECK(all_finite(s));
    s.samples[7] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_FALSE(all_finite(s));
}

}  // TEST_SUITE
