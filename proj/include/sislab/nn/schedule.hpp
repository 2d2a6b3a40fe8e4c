#pragma once

#include "sislab/types.hpp"

#include <cstdint>

namespace sislab {

// Linear learning-rate ramp from `start` to `end` over `total_steps`,
// clamped at `end` afterwards.
struct LrSchedule {
  Scalar start = 0.0;
  Scalar end = 0.0;
  std::uint64_t total_steps = 1;
};

inline Scalar lr_at(const LrSchedule& s, std::uint64_t step) {
  if (step >= s.total_steps) return s.end;
  const Scalar t = static_cast<Scalar>(step) / static_cast<Scalar>(s.total_steps);
  return s.start + (s.end - s.start) * t;
}

} // namespace sislab
