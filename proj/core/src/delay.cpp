#include "sicsim/delay.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sicsim {
namespace {

constexpr double kKaiserBeta = 8.0;
constexpr std::ptrdiff_t kHalf = static_cast<std::ptrdiff_t>(kDelayFilterLength / 2);  // 64

double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

double kaiser(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    static const double i0_beta = std::cyl_bessel_i(0.0, kKaiserBeta);
    return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - u * u)) / i0_beta;
}

}  // namespace

ComplexSignal fractional_delay(const ComplexSignal& s, double delay_s) {
    if (delay_s < 0.0) throw std::invalid_argument("non-causal delay");
    if (s.samples.empty()) throw std::invalid_argument("empty signal");
    if (!(s.sample_rate_hz > 0.0)) throw std::invalid_argument("invalid sample rate");

    const double d = delay_s * s.sample_rate_hz;
    const std::size_t n = s.size();
    if (d > static_cast<double>(n)) throw std::invalid_argument("delay exceeds signal length");

    ComplexSignal out;
    out.sample_rate_hz = s.sample_rate_hz;
    out.start_time_s = s.start_time_s;
    out.samples.assign(n, cdouble{0.0, 0.0});

    const double rounded = std::round(d);
    if (std::abs(d - rounded) < 1e-9) {
        const std::size_t k = static_cast<std::size_t>(rounded);
        if (k < n) std::copy(s.samples.begin(), s.samples.end() - static_cast<std::ptrdiff_t>(k),
                             out.samples.begin() + static_cast<std::ptrdiff_t>(k));
        return out;
    }

    const double mf = std::floor(d);
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(mf);
    const double eta = d - mf;

    double h[kDelayFilterLength];
    for (std::size_t j = 0; j < kDelayFilterLength; ++j) {
        const double t = static_cast<double>(static_cast<std::ptrdiff_t>(j) - kHalf) - eta;
        h[j] = sinc(t) * kaiser(t / static_cast<double>(kHalf + 1));
    }

    // out[n] = sum_j h[j] * x[n - m + kHalf - j], x indexed with zero fill.
    const auto* x = s.samples.data();
    auto* y = out.samples.data();
    const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
    const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(kDelayFilterLength) - 1;

    auto edge = [&](std::ptrdiff_t i) {
        const std::ptrdiff_t base = i - m + kHalf;
        const std::ptrdiff_t jlo = std::max<std::ptrdiff_t>(0, base - (nn - 1));
        const std::ptrdiff_t jhi = std::min(last, base);
        cdouble acc{0.0, 0.0};
        for (std::ptrdiff_t j = jlo; j <= jhi; ++j) acc += h[j] * x[base - j];
        y[i] = acc;
    };

    // Interior samples use all taps: base - last >= 0 and base <= nn - 1.
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, m + kHalf);
    const std::ptrdiff_t hi = std::min(nn - 1, nn - 1 + m - kHalf);
    for (std::ptrdiff_t i = 0; i < std::min(lo, nn); ++i) edge(i);
    for (std::ptrdiff_t i = lo; i <= hi; ++i) {
        const cdouble* xb = x + (i - m + kHalf);
        cdouble a0{0.0, 0.0}, a1{0.0, 0.0}, a2{0.0, 0.0}, a3{0.0, 0.0};
        for (std::size_t j = 0; j < kDelayFilterLength - 1; j += 4) {
            a0 += h[j] * xb[-static_cast<std::ptrdiff_t>(j)];
            a1 += h[j + 1] * xb[-static_cast<std::ptrdiff_t>(j + 1)];
            a2 += h[j + 2] * xb[-static_cast<std::ptrdiff_t>(j + 2)];
            a3 += h[j + 3] * xb[-static_cast<std::ptrdiff_t>(j + 3)];
        }
        y[i] = ((a0 + a1) + (a2 + a3)) + h[last] * xb[-last];
    }
    for (std::ptrdiff_t i = std::max(hi + 1, lo); i < nn; ++i) edge(i);
    return out;
}

}  // namespace sicsim
