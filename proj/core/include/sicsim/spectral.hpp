#pragma once

#include <cstddef>
#include <vector>

#include "sicsim/signal.hpp"

namespace sicsim {

enum class Window { hann, rect };

/// Two-sided baseband power spectral density, bins sorted ascending in
/// frequency. Normalized so that integrating the linear-scale PSD over all
/// bins recovers total signal power (Parseval).
struct PsdEstimate {
    std::vector<double> freqs_hz;
    std::vector<double> psd_dbm_per_hz;
    double rbw_hz = 0.0;
    double bin_spacing_hz = 0.0;

    /// Band-integrated power in dBm; bins are weighted by their overlap
    /// with [f_lo, f_hi].
    double integrate_dbm(double f_lo, double f_hi) const;
    double total_power_dbm() const;
    /// Power of a single spectral line at f0, integrated over
    /// f0 +/- half_width_hz.
    double line_power_dbm(double f0_hz, double half_width_hz) const;
};

inline constexpr std::size_t kDefaultSegLen = 4096;
inline constexpr double kDefaultOverlap = 0.5;

/// Averaged-periodogram (Welch) PSD. Window power normalization keeps
/// Parseval within the estimator variance.
PsdEstimate psd_welch(const ComplexSignal& s, std::size_t seg_len = kDefaultSegLen,
                      double overlap_frac = kDefaultOverlap,
                      Window window = Window::hann);

/// Band-integrated power in dBm over [f_lo, f_hi], both within Nyquist.
/// Uses psd_welch with the default segment length (clamped to the record).
double power_dbm(const ComplexSignal& s, double f_lo_hz, double f_hi_hz);

}  // namespace sicsim
