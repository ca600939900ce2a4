#include "sicsim/pa.hpp"

#include <cmath>
#include <stdexcept>

namespace sicsim {

cdouble PaParams::default_a3() {
    // Real negative a3 giving |1 + a3*A^2| = 10^(-1/20) at A^2 = 10^(-0.1) mW
    // (1 dB compression at -1 dBm input).
    const double a = (1.0 - std::pow(10.0, -1.0 / 20.0)) / std::pow(10.0, -0.1);
    return {-a, 0.0};
}

ComplexSignal amplify(const ComplexSignal& x, const PaParams& p) {
    ComplexSignal y = x;
    const double g = amplitude_from_db(p.gain_db);
    for (auto& v : y.samples) {
        const double m2 = std::norm(v);
        v = g * (v + p.a3 * v * m2 + p.a5 * v * (m2 * m2));
    }
    if (p.lo_leakage_dbc) {
        const double pow_mw = y.samples.empty() ? 0.0 : mean_power_mw(y);
        const double off = std::sqrt(pow_mw * mw_from_dbm(*p.lo_leakage_dbc));
        for (auto& v : y.samples) v += off;
    }
    return y;
}

double imd3_dbc(const PaParams& p, double per_tone_input_dbm) {
    const double a2 = mw_from_dbm(per_tone_input_dbm);  // A^2
    const double a = std::sqrt(a2);
    const cdouble imd = p.a3 * (a2 * a) + 5.0 * p.a5 * (a2 * a2 * a);
    const cdouble fund = cdouble{a, 0.0} + 3.0 * p.a3 * (a2 * a) + 10.0 * p.a5 * (a2 * a2 * a);
    if (std::abs(imd) == 0.0) return kNegInfDb;
    return 20.0 * std::log10(std::abs(imd) / std::abs(fund));
}

}  // namespace sicsim
