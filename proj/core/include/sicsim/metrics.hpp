#pragma once

#include <limits>

#include "sicsim/lms.hpp"
#include "sicsim/signal.hpp"

namespace sicsim {

inline constexpr double kNotConverged = std::numeric_limits<double>::infinity();

struct CancellationReport {
    double f_lo_hz = 0.0, f_hi_hz = 0.0;
    double p_tx_dbm = 0.0, p_y_dbm = 0.0, p_z_dbm = 0.0;
    double intrinsic_db = 0.0;  // p_tx - p_y
    double active_db = 0.0;     // p_y - p_z
    double total_db = 0.0;      // intrinsic + active, exact by construction
};

// Band-integrated powers of the transmit, intrinsic-only, and cancelled
// signals over the steady-state segment (the final 1 - steady_state_start
// fraction of each record).
CancellationReport cancellation_report(const ComplexSignal& tx,
                                       const ComplexSignal& y,
                                       const ComplexSignal& z, double f_lo_hz,
                                       double f_hi_hz,
                                       double steady_state_start = 0.5);

// First trace time after which residual power stays within settle_margin_db
// of the median over the final 20% of the trace; kNotConverged if it never
// does.
double convergence_time(const LmsTrace& trace, double settle_margin_db = 3.0);

struct SoiFidelity {
    double power_delta_db = 0.0;
    double evm_db = 0.0;
};

// Compares the canceller output to the injected signal of interest over
// soi_band: band-power delta, and EVM after a least-squares one-tap complex
// alignment of z (filtered to the band) against soi_in. Measured over the
// steady-state segment.
SoiFidelity soi_fidelity(const ComplexSignal& soi_in, const ComplexSignal& z,
                         double f_lo_hz, double f_hi_hz,
                         double steady_state_start = 0.5);

}  // namespace sicsim
