#include "sicsim/signal.hpp"

#include <random>
#include <stdexcept>

namespace sicsim {

double mean_power_mw(const ComplexSignal& s) {
    if (s.samples.empty()) throw std::invalid_argument("empty signal");
    double acc = 0.0;
    for (const auto& v : s.samples) acc += std::norm(v);
    return acc / static_cast<double>(s.samples.size());
}

double power_dbm(const ComplexSignal& s) { return dbm_from_mw(mean_power_mw(s)); }

void add_noise_floor_inplace(ComplexSignal& s, double floor_dbm,
                             std::uint64_t seed) {
    const double p_mw = mw_from_dbm(floor_dbm);
    if (p_mw == 0.0) return;
    std::mt19937_64 rng(seed);
    // Total complex power p_mw splits evenly between I and Q.
    std::normal_distribution<double> dist(0.0, std::sqrt(p_mw / 2.0));
    for (auto& v : s.samples) {
        const double re = dist(rng);
        const double im = dist(rng);
        v += cdouble(re, im);
    }
}

ComplexSignal add_noise_floor(const ComplexSignal& s, double floor_dbm,
                              std::uint64_t seed) {
    ComplexSignal out = s;
    add_noise_floor_inplace(out, floor_dbm, seed);
    return out;
}

bool all_finite(const ComplexSignal& s) {
    for (const auto& v : s.samples) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

}  // namespace sicsim
