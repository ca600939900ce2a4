#pragma once

#include <cstddef>

#include "sicsim/signal.hpp"

namespace sicsim {

// Windowed-sinc interpolator length; also the interior margin (per edge, in
// samples, plus the integer delay) within which delayed samples are exact.
inline constexpr std::size_t kDelayFilterLength = 129;

// Delays a signal by delay_s seconds. Integer-sample delays are exact shifts;
// fractional delays use a Kaiser-windowed sinc interpolator. Output has the
// same length as the input: leading samples are zero-filled, trailing samples
// fall off the end.
ComplexSignal fractional_delay(const ComplexSignal& s, double delay_s);

}  // namespace sicsim
