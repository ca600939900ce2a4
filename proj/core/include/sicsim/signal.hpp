#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

namespace sicsim {

using cdouble = std::complex<double>;

inline constexpr double kNegInfDb = -std::numeric_limits<double>::infinity();

inline double dbm_from_mw(double mw) {
    return mw > 0.0 ? 10.0 * std::log10(mw) : kNegInfDb;
}

inline double mw_from_dbm(double dbm) {
    return std::isinf(dbm) && dbm < 0.0 ? 0.0 : std::pow(10.0, dbm / 10.0);
}

inline double amplitude_from_db(double db) { return std::pow(10.0, db / 20.0); }

/// Uniformly sampled complex baseband waveform. Samples are in sqrt-mW, so
/// |s|^2 is instantaneous power in mW and dBm figures compare directly.
struct ComplexSignal {
    std::vector<cdouble> samples;
    double sample_rate_hz = 0.0;
    double start_time_s = 0.0;

    std::size_t size() const { return samples.size(); }
    double dt() const { return 1.0 / sample_rate_hz; }
    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

/// Mean of |s|^2 in mW. Throws "empty signal" on an empty record.
double mean_power_mw(const ComplexSignal& s);

/// Full-band power in dBm; an all-zero signal reports -inf.
double power_dbm(const ComplexSignal& s);

/// Adds circularly symmetric white complex Gaussian noise whose total
/// full-band power is floor_dbm. floor_dbm = -inf leaves the signal
/// untouched. Deterministic per seed.
ComplexSignal add_noise_floor(const ComplexSignal& s, double floor_dbm,
                              std::uint64_t seed);

/// In-place variant of add_noise_floor.
void add_noise_floor_inplace(ComplexSignal& s, double floor_dbm,
                             std::uint64_t seed);

bool all_finite(const ComplexSignal& s);

}  // namespace sicsim
