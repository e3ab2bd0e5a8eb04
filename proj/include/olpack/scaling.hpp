#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <vector>

#include "olpack/core.hpp"

namespace olpack {

/// A ratio whose denominator (or, for consistency, numerator) may vanish.
struct Ratio {
  double value = 0.0;
  bool degenerate = false;  // value is +inf when set

  static Ratio of(double num, double den) {
    if (den > 0.0) return {num / den, false};
    return {std::numeric_limits<double>::infinity(), true};
  }
  static Ratio flagged() { return {std::numeric_limits<double>::infinity(), true}; }
};

enum class ScaleMode {
  shrink,     // divide by max(1, V): feasible solutions are left alone
  normalize,  // divide by V whenever V > 0: the tightest row ends exactly at capacity
};

struct Scaled {
  std::vector<double> x;
  double scale = 1.0;
};

/// Divides x by its violation factor V so that it becomes feasible. In shrink
/// mode the divisor is max(1, V); in normalize mode it is V (1 when x has no load).
inline Scaled scale_to_feasible(std::span<const double> x, const PackingInstance& inst,
                                ScaleMode mode = ScaleMode::shrink) {
  Scaled out;
  const double v = violation_factor(loads(inst, x), inst.b);
  out.scale = mode == ScaleMode::shrink ? std::max(1.0, v) : (v > 0.0 ? v : 1.0);
  out.x.assign(x.begin(), x.end());
  if (out.scale != 1.0)
    for (auto& xi : out.x) xi /= out.scale;
  return out;
}

/// f(x / scale) / opt.
inline Ratio ratio_after_scaling(std::span<const double> x, const PackingInstance& inst, double opt,
                                 ScaleMode mode = ScaleMode::shrink) {
  if (!(opt > 0.0)) return Ratio::flagged();
  const auto scaled = scale_to_feasible(x, inst, mode);
  return Ratio::of(eval_objective(inst, scaled.x), opt);
}

}  // namespace olpack
