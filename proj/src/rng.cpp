#include "csinst/rng.hpp"

#include <cmath>

namespace csinst {

double SplitMix64::next_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // u1 on (0,1] keeps the log finite; u2 on [0,1) for the angle.
  double u1 = next_open01();
  double u2 = next_unit();
  double r = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * M_PI * u2;
  cached_ = r * std::sin(angle);
  has_cached_ = true;
  return r * std::cos(angle);
}

}  // namespace csinst
