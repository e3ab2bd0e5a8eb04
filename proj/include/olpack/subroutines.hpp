#pragma once

// Classical online packing algorithms used as black boxes by the switching
// wrapper. Each one consumes columns one at a time, returns its own x_j and
// reports a running feasibility factor beta.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "olpack/core.hpp"

namespace olpack {

template <typename S>
concept OnlineSubroutine = requires(S s, const S cs, const Column& col) {
  { s.observe(col) } -> std::convertible_to<double>;
  { cs.beta() } -> std::convertible_to<double>;
};

/// Own loads, own solution, kappa, round counter.
class SubroutineState {
 public:
  SubroutineState(std::size_t m, std::vector<double> b) : b_(std::move(b)), loads_(m, 0.0), kappa_(m) {
    if (b_.size() != m) throw std::invalid_argument("subroutine: b must have m entries");
  }

  void commit(const Column& col, double z) {
    for (const auto& e : col.coeffs) loads_[e.row] += e.value * z;
    x_.push_back(z);
  }

  // Largest z keeping every row of col within capacity.
  double headroom(const Column& col) const {
    double z = std::numeric_limits<double>::infinity();
    for (const auto& e : col.coeffs)
      if (e.value > 0.0) z = std::min(z, (b_[e.row] - loads_[e.row]) / e.value);
    return std::max(0.0, z);
  }

  std::size_t m() const { return loads_.size(); }
  std::size_t rounds() const { return x_.size(); }
  const std::vector<double>& b() const { return b_; }
  const std::vector<double>& loads() const { return loads_; }
  const std::vector<double>& solution() const { return x_; }
  KappaTracker& kappa() { return kappa_; }
  const KappaTracker& kappa() const { return kappa_; }

 private:
  std::vector<double> b_;
  std::vector<double> loads_;
  std::vector<double> x_;
  KappaTracker kappa_;
};

/// Takes as much of each column as the remaining capacity allows. Never
/// violates a constraint.
class GreedySaturate {
 public:
  GreedySaturate(std::size_t m, std::vector<double> b) : st_(m, std::move(b)) {}

  double observe(const Column& col) {
    st_.kappa().update(col);
    const double z = st_.headroom(col);
    st_.commit(col, z);
    return z;
  }

  double beta() const { return 1.0; }
  const SubroutineState& state() const { return st_; }

 private:
  SubroutineState st_;
};

struct PriceOptions {
  double B = 1.0;       // competitiveness / feasibility trade-off
  double c_beta = 1.0;  // constant in the reported beta
};

/// Exponential-price primal-dual rule. Row i is priced at
///   p_i(L) = (1 + m kappa_i)^(L / (B b_i)) - 1
/// and column j is raised while its marginal utility still covers the
/// priced resources it consumes.
class PricePacking {
 public:
  PricePacking(std::size_t m, std::vector<double> b, PriceOptions opt = {}) : st_(m, std::move(b)), opt_(opt) {
    if (!(opt_.B > 0.0)) throw std::invalid_argument("price packing: B must be > 0");
    if (!(opt_.c_beta > 0.0)) throw std::invalid_argument("price packing: c_beta must be > 0");
  }

  double price(std::size_t row, double load) const {
    const double base = 1.0 + static_cast<double>(st_.m()) * st_.kappa().kappa(row);
    return std::pow(base, load / (opt_.B * st_.b()[row])) - 1.0;
  }

  // Priced resource cost minus marginal utility at z; nondecreasing in z.
  double excess(const Column& col, double z) const {
    double cost = 0.0;
    for (const auto& e : col.coeffs)
      if (e.value > 0.0) cost += e.value * price(e.row, st_.loads()[e.row] + e.value * z);
    return cost - col.piece.marginal(z);
  }

  double observe(const Column& col) {
    st_.kappa().update(col);
    const double z = crossing(col);
    st_.commit(col, z);
    return z;
  }

  double beta() const {
    const double mk = static_cast<double>(st_.m()) * st_.kappa().kappa();
    return std::max(1.0, opt_.c_beta * std::log2(1.0 + mk) / opt_.B);
  }

  const SubroutineState& state() const { return st_; }
  const PriceOptions& options() const { return opt_; }

 private:
  // sup{z >= 0 : excess(z) <= 0}: exponential bracketing from 1, then bisection.
  double crossing(const Column& col) const {
    if (excess(col, 0.0) > 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (!(excess(col, hi) > 0.0)) {
      lo = hi;
      hi *= 2.0;
      if (!std::isfinite(hi)) return lo;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (excess(col, mid) > 0.0) hi = mid;
      else lo = mid;
    }
    return lo;
  }

  SubroutineState st_;
  PriceOptions opt_;
};

/// Threshold function for online fractional knapsack with value densities in
/// [lower, upper]: psi(z) = (upper e / lower)^z * (lower / e).
inline double knapsack_psi(double z, double lower, double upper) {
  return std::pow(upper * std::exp(1.0) / lower, z) * (lower / std::exp(1.0));
}

/// Target utilization min(1, psi^{-1}(d)), clamped below at 0.
inline double knapsack_target(double density, double lower, double upper) {
  const double t = std::log(density * std::exp(1.0) / lower) / std::log(upper * std::exp(1.0) / lower);
  return std::clamp(t, 0.0, 1.0);
}

/// Capacity accepted for an item of the given density and size when `used`
/// of `capacity` is already filled.
inline double knapsack_threshold_accept(double density, double size, double capacity, double used, double lower,
                                        double upper) {
  if (!(lower > 0.0) || !(lower <= upper)) throw std::invalid_argument("knapsack threshold: need 0 < L <= U");
  if (!(density >= lower && density <= upper))
    throw std::invalid_argument("knapsack threshold: density outside [L, U]");
  if (!(capacity > 0.0)) throw std::invalid_argument("knapsack threshold: capacity must be > 0");
  const double utilization = used / capacity;
  const double target = knapsack_target(density, lower, upper);
  return std::min(size, capacity * std::max(0.0, target - utilization));
}

struct KnapsackOptions {
  std::size_t row = 0;  // capacity row
  double lower = 1.0;
  double upper = 100.0;
};

/// Adapts the threshold rule to a general instance: `row` is the knapsack,
/// density is marginal utility at 0 per unit of knapsack weight (clamped into
/// [lower, upper]), item size is whatever every other row still admits.
class KnapsackThreshold {
 public:
  KnapsackThreshold(std::size_t m, std::vector<double> b, KnapsackOptions opt = {})
      : st_(m, std::move(b)), opt_(opt) {
    if (opt_.row >= m) throw std::invalid_argument("knapsack threshold: row out of range");
    if (!(opt_.lower > 0.0) || !(opt_.lower <= opt_.upper))
      throw std::invalid_argument("knapsack threshold: need 0 < L <= U");
  }

  double observe(const Column& col) {
    st_.kappa().update(col);
    const double weight = col.coefficient(opt_.row);
    const double cap_x = st_.headroom(col);
    double z = 0.0;
    if (weight > 0.0 && cap_x > 0.0) {
      const double density = std::clamp(col.piece.marginal(0.0) / weight, opt_.lower, opt_.upper);
      const double accepted = knapsack_threshold_accept(density, cap_x * weight, st_.b()[opt_.row],
                                                        st_.loads()[opt_.row], opt_.lower, opt_.upper);
      z = std::min(cap_x, accepted / weight);
    } else if (weight == 0.0) {
      z = cap_x;  // free with respect to the knapsack row
    }
    st_.commit(col, z);
    return z;
  }

  double beta() const { return 1.0; }
  const SubroutineState& state() const { return st_; }

 private:
  SubroutineState st_;
  KnapsackOptions opt_;
};

/// Plays back recorded outputs of another subroutine run on the same stream.
class ReplaySubroutine {
 public:
  ReplaySubroutine(std::vector<double> x, std::vector<double> betas) : x_(std::move(x)), betas_(std::move(betas)) {
    if (x_.size() != betas_.size()) throw std::invalid_argument("replay: size mismatch");
  }

  double observe(const Column&) {
    if (pos_ >= x_.size()) throw std::out_of_range("replay: stream exhausted");
    return x_[pos_++];
  }

  double beta() const { return pos_ == 0 ? 1.0 : betas_[pos_ - 1]; }

 private:
  std::vector<double> x_;
  std::vector<double> betas_;
  std::size_t pos_ = 0;
};

struct SubroutineConfig {
  std::string name = "price";  // "greedy", "price", "knapsack-threshold"
  PriceOptions price{};
  KnapsackOptions knapsack{};
};

/// Runtime-selected subroutine.
class AnySubroutine {
 public:
  using Variant = std::variant<GreedySaturate, PricePacking, KnapsackThreshold, ReplaySubroutine>;

  template <typename S>
    requires std::constructible_from<Variant, S>
  AnySubroutine(S s) : v_(std::move(s)) {}

  double observe(const Column& col) {
    return std::visit([&](auto& s) { return s.observe(col); }, v_);
  }
  double beta() const {
    return std::visit([](const auto& s) { return s.beta(); }, v_);
  }

 private:
  Variant v_;
};

inline AnySubroutine make_subroutine(const SubroutineConfig& cfg, std::size_t m, const std::vector<double>& b) {
  if (cfg.name == "greedy") return GreedySaturate(m, b);
  if (cfg.name == "price") return PricePacking(m, b, cfg.price);
  if (cfg.name == "knapsack-threshold") return KnapsackThreshold(m, b, cfg.knapsack);
  throw std::invalid_argument("unknown subroutine: " + cfg.name);
}

/// Outputs of a standalone subroutine run: x^O and beta after each round.
struct SubroutineRun {
  std::vector<double> x;
  std::vector<double> betas;
};

template <OnlineSubroutine S>
SubroutineRun run_subroutine(S& sub, std::span<const Column> columns) {
  SubroutineRun run;
  run.x.reserve(columns.size());
  run.betas.reserve(columns.size());
  for (const auto& col : columns) {
    run.x.push_back(sub.observe(col));
    run.betas.push_back(sub.beta());
  }
  return run;
}

}  // namespace olpack
