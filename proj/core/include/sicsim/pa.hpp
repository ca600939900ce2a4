#pragma once

#include <optional>

#include "sicsim/signal.hpp"

namespace sicsim {

// Memoryless odd-order baseband polynomial PA:
//   y = g * (x + a3*x*|x|^2 + a5*x*|x|^4),  g = 10^(gain_db/20),
// plus optional LO leakage as a constant complex offset lo_leakage_dbc below
// the distorted output power. Coefficients are normalized to unit small-signal
// gain. Defaults: 21 dB gain and a3 set for 1 dB gain compression at -1 dBm
// input, so a 0 dBm drive sits beyond the compression point.
struct PaParams {
    double gain_db = 21.0;
    cdouble a3 = default_a3();
    cdouble a5 = {0.0, 0.0};
    std::optional<double> lo_leakage_dbc;  // disabled unless set; typical -25

    static cdouble default_a3();
};

ComplexSignal amplify(const ComplexSignal& x, const PaParams& p);

// Closed-form two-tone IMD3 level (dBc relative to one output fundamental)
// for per-tone input power per_tone_input_dbm. Oracle for amplify():
//   IMD3 amplitude      |a3*A^3 + 5*a5*A^5|
//   fundamental         |A + 3*a3*A^3 + 10*a5*A^5|
// Returns -inf when the distortion terms vanish.
double imd3_dbc(const PaParams& p, double per_tone_input_dbm);

}  // namespace sicsim
