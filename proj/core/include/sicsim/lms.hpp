#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sicsim/canceller.hpp"
#include "sicsim/channel.hpp"
#include "sicsim/signal.hpp"

namespace sicsim {

// ~1/20 of the empirically measured divergence bound for the default scenario
// (21 dBm reference, two branches, 500 MS/s); units 1/(mW*s).
inline constexpr double kDefaultMu = 2.0e5;

enum class BranchMode { adaptive, manual };

struct LmsConfig {
    double mu = kDefaultMu;
    // Finite integrator DC gain G (dB) modeled as a first-order leak applied
    // each step to adaptive branches:
    //   lambda = 1 - mu*dt*P0/G_lin,  P0 = 1 mW
    // i.e. a leaky integrator whose unity-gain rate is mu*P0 and whose pole
    // sits G below it, so the weight bias shrinks as 1/G. +inf disables.
    double integrator_dc_gain_db = 50.0;
    // Per-branch modes; empty means all adaptive. Manual branches hold their
    // initial weight.
    std::vector<BranchMode> modes;
    // Per-branch correlator DC offsets and their manual nulling counterparts,
    // added inside the integrand (empty means zero).
    std::vector<double> dc_offset_i, dc_offset_q;
    std::vector<double> nulling_offset_i, nulling_offset_q;
    std::size_t trace_decim = 256;
    // Trailing-mean window for the traced residual power; 16384 samples
    // (33 us at 500 MS/s) keeps the steady-state estimate within ~0.5 dB.
    std::size_t residual_window = 16384;
};

struct LmsTrace {
    std::vector<double> times_s;
    std::vector<std::vector<cdouble>> weights;  // [branch][time index]
    std::vector<double> residual_power_dbm;     // trailing-window mean power
};

struct ClosedLoopResult {
    ComplexSignal z;
    LmsTrace trace;
    CancellerWeights final_weights;
};

// Single I/Q integrator update for each adaptive branch followed by the leak:
//   w_I += mu*dt*(x_I*z_I + x_Q*z_Q + o_I + nu_I)
//   w_Q += mu*dt*(x_I*z_Q - x_Q*z_I + o_Q + nu_Q)
// which is the complex form dw = mu*dt*conj(x)*z plus offsets.
CancellerWeights lms_step(const CancellerWeights& w,
                          const std::vector<cdouble>& x_delayed, cdouble z,
                          double dt, const LmsConfig& cfg);

// Sample-by-sample closed loop against a precomputed receive signal y:
// z[n] = y[n] - sum_n w_n*x_ref(t-tau_n), then lms_step. Throws
// "LMS diverged (reduce mu)" if any |w_n| exceeds 1e6.
ClosedLoopResult run_closed_loop_prepared(const ComplexSignal& y,
                                          const ComplexSignal& x_ref,
                                          const CancellerConfig& cfg,
                                          const LmsConfig& lms,
                                          const CancellerWeights& w0);

// Convenience wrapper: y = propagate(ch, tx, noise_seed) (+ soi if given).
ClosedLoopResult run_closed_loop(const ComplexSignal& tx, const SiChannel& ch,
                                 const CancellerConfig& cfg, const LmsConfig& lms,
                                 const CancellerWeights& w0,
                                 const ComplexSignal* soi = nullptr,
                                 std::uint64_t noise_seed = 0);

// Least-squares weights min_w ||y - sum w_n x(t-tau_n)||^2 via the normal
// equations over the interior region; the brute-force oracle the LMS loop
// converges to. Throws if the Gram matrix condition number exceeds 1e10.
CancellerWeights wiener_solution(const ComplexSignal& x_ref,
                                 const ComplexSignal& y,
                                 const CancellerConfig& cfg);

}  // namespace sicsim
