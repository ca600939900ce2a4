#include "sicsim/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sicsim/delay.hpp"

namespace sicsim {
namespace {

cdouble polar_db(double gain_db, double phase_rad) {
    return std::polar(amplitude_from_db(gain_db), phase_rad);
}

bool tap_has_events(const SiChannel& ch, std::size_t k) {
    for (const auto& e : ch.events)
        if (e.tap_index == k) return true;
    return false;
}

}  // namespace

SiChannel preset(ChannelPreset kind) {
    SiChannel ch;
    ch.noise_floor_dbm = -90.0;
    switch (kind) {
        case ChannelPreset::circulator:
            ch.taps = {{3.5e-9, -23.5, 0.0},
                       {5.0e-9, -20.0, kCirculatorReflectionPhase},
                       {15e-9, -45.0, std::numbers::pi}};
            break;
        case ChannelPreset::dual_antenna:
            ch.taps = {{4.0e-9, -29.6, 0.0}, {15e-9, -50.0, std::numbers::pi}};
            break;
    }
    return ch;
}

cdouble tap_gain(const SiChannel& ch, std::size_t tap_index, double t) {
    if (tap_index >= ch.taps.size()) throw std::out_of_range("invalid tap index");
    double g = ch.taps[tap_index].gain_db;
    double ph = ch.taps[tap_index].phase_rad;
    for (const auto& e : ch.events) {
        if (e.tap_index != tap_index || t < e.time_s) continue;
        if (e.kind == DisturbanceEvent::Kind::step) {
            g = e.new_gain_db;
            ph = e.new_phase_rad;
        } else {
            if (!(e.ramp_duration_s > 0.0))
                throw std::invalid_argument("ramp_duration_s must be positive");
            const double a = std::min(1.0, (t - e.time_s) / e.ramp_duration_s);
            g += a * (e.new_gain_db - g);
            ph += a * (e.new_phase_rad - ph);
        }
    }
    return polar_db(g, ph);
}

ComplexSignal propagate(const SiChannel& ch, const ComplexSignal& x,
                        std::uint64_t rng_seed) {
    if (ch.taps.empty()) throw std::invalid_argument("channel has no taps");
    for (const auto& tap : ch.taps)
        if (tap.delay_s * x.sample_rate_hz > static_cast<double>(x.size()))
            throw std::invalid_argument("tap delay exceeds signal duration");

    ComplexSignal y;
    y.sample_rate_hz = x.sample_rate_hz;
    y.start_time_s = x.start_time_s;
    y.samples.assign(x.size(), cdouble{0.0, 0.0});
    const double dt = x.dt();

    for (std::size_t k = 0; k < ch.taps.size(); ++k) {
        const ComplexSignal xd = fractional_delay(x, ch.taps[k].delay_s);
        if (!tap_has_events(ch, k)) {
            const cdouble c = polar_db(ch.taps[k].gain_db, ch.taps[k].phase_rad);
            for (std::size_t i = 0; i < y.size(); ++i) y.samples[i] += c * xd.samples[i];
        } else {
            for (std::size_t i = 0; i < y.size(); ++i) {
                const double t = x.start_time_s + static_cast<double>(i) * dt;
                y.samples[i] += tap_gain(ch, k, t) * xd.samples[i];
            }
        }
    }
    add_noise_floor_inplace(y, ch.noise_floor_dbm, rng_seed);
    return y;
}

std::vector<cdouble> frequency_response(const SiChannel& ch,
                                        const std::vector<double>& freqs_hz,
                                        double t) {
    std::vector<cdouble> h(freqs_hz.size(), cdouble{0.0, 0.0});
    for (std::size_t k = 0; k < ch.taps.size(); ++k) {
        const cdouble g = tap_gain(ch, k, t);
        for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
            const double ph = -2.0 * std::numbers::pi * freqs_hz[i] * ch.taps[k].delay_s;
            h[i] += g * cdouble{std::cos(ph), std::sin(ph)};
        }
    }
    return h;
}

}  // namespace sicsim
