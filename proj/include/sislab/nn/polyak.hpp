#pragma once

#include "sislab/errors.hpp"
#include "sislab/types.hpp"

namespace sislab {

// target <- (1 - tau) * target + tau * online
inline void polyak_update(Vec& target, const Vec& online, Scalar tau) {
  if (target.size() != online.size())
    throw ConfigError("polyak_update: length mismatch");
  if (!(tau > 0.0 && tau <= 1.0))
    throw ConfigError("polyak_update: tau must be in (0, 1]");
  target = (1.0 - tau) * target + tau * online;
}

} // namespace sislab
