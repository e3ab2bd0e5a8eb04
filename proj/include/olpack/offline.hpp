#pragma once

// Offline optimum oracles: dense primal simplex for linear objectives,
// Frank-Wolfe for separable concave objectives, and a grid-search oracle for
// tiny instances used as an independent check in tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "olpack/core.hpp"

namespace olpack {

enum class SolveStatus { optimal, approximate, not_converged, model_error };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::approximate: return "approximate";
    case SolveStatus::not_converged: return "not-converged";
    case SolveStatus::model_error: return "model-error";
  }
  return "?";
}

struct OfflineResult {
  std::vector<double> x_star;
  double opt_value = 0.0;
  SolveStatus status = SolveStatus::optimal;
  double tolerance = 0.0;    // requested tolerance for approximate results
  double gap = 0.0;          // last duality gap (Frank-Wolfe only)
  std::size_t iterations = 0;
};

enum class PivotRule {
  bland,             // smallest-index entering and leaving variables
  dantzig_fallback,  // largest reduced cost; Bland while pivots are degenerate
};

struct SimplexOptions {
  PivotRule rule = PivotRule::dantzig_fallback;
  std::size_t max_pivots = 200000;
  double eps = 1e-10;
};

/// max c^T x  s.t.  A x <= b, x >= 0  with b > 0 and A >= 0, dense tableau.
/// Starts from the all-slack basis, which is feasible because b > 0.
class DenseSimplex {
 public:
  // a is row-major m x n.
  DenseSimplex(std::size_t m, std::size_t n, std::span<const double> a, std::span<const double> b)
      : m_(m), n_(n), a_(a.begin(), a.end()), b_(b.begin(), b.end()) {
    if (a_.size() != m * n || b_.size() != m) throw std::invalid_argument("DenseSimplex: dimension mismatch");
  }

  struct Solution {
    std::vector<double> x;
    double value = 0.0;
    bool ok = false;
    std::size_t pivots = 0;
  };

  Solution solve(std::span<const double> c, const SimplexOptions& opt = {}) const {
    if (c.size() != n_) throw std::invalid_argument("DenseSimplex: objective size mismatch");
    const std::size_t width = n_ + m_ + 1;  // structurals, slacks, rhs
    const std::size_t rhs = n_ + m_;
    std::vector<double> t((m_ + 1) * width, 0.0);
    auto at = [&](std::size_t r, std::size_t col) -> double& { return t[r * width + col]; };

    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = a_[i * n_ + j];
      at(i, n_ + i) = 1.0;
      at(i, rhs) = b_[i];
    }
    // Objective row holds reduced costs; a positive entry can enter.
    double cscale = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      at(m_, j) = c[j];
      cscale = std::max(cscale, std::abs(c[j]));
    }
    const double rc_eps = opt.eps * std::max(1.0, cscale);

    std::vector<std::size_t> basis(m_);
    for (std::size_t i = 0; i < m_; ++i) basis[i] = n_ + i;

    Solution sol;
    bool use_bland = opt.rule == PivotRule::bland;
    std::vector<std::size_t> ties;
    for (;;) {
      std::size_t enter = width;
      if (use_bland) {
        for (std::size_t j = 0; j < rhs; ++j)
          if (at(m_, j) > rc_eps) { enter = j; break; }
      } else {
        double best = rc_eps;
        for (std::size_t j = 0; j < rhs; ++j)
          if (at(m_, j) > best) { best = at(m_, j); enter = j; }
      }
      if (enter == width) break;  // optimal
      if (sol.pivots >= opt.max_pivots) return sol;

      // Ratio test; ties broken by smallest basic variable index.
      std::size_t leave = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double piv = at(i, enter);
        if (piv <= opt.eps) continue;
        const double ratio = at(i, rhs) / piv;
        const double slack = 1e-12 * std::max(1.0, std::abs(best_ratio));
        if (leave == m_ || ratio < best_ratio - slack) {
          best_ratio = ratio;
          leave = i;
        } else if (ratio <= best_ratio + slack && basis[i] < basis[leave]) {
          best_ratio = std::min(best_ratio, ratio);
          leave = i;
        }
      }
      if (leave == m_) return sol;  // unbounded; excluded by validation

      if (opt.rule == PivotRule::dantzig_fallback) use_bland = best_ratio <= opt.eps;
      pivot(t, width, leave, enter);
      basis[leave] = enter;
      ++sol.pivots;
    }

    sol.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis[i] < n_) sol.x[basis[i]] = std::max(0.0, at(i, rhs));
    sol.value = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sol.value += c[j] * sol.x[j];
    sol.ok = true;
    return sol;
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

 private:
  void pivot(std::vector<double>& t, std::size_t width, std::size_t r, std::size_t e) const {
    double* prow = &t[r * width];
    const double inv = 1.0 / prow[e];
    for (std::size_t k = 0; k < width; ++k) prow[k] *= inv;
    prow[e] = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* row = &t[i * width];
      const double f = row[e];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < width; ++k) row[k] -= f * prow[k];
      row[e] = 0.0;
    }
  }

  std::size_t m_, n_;
  std::vector<double> a_;
  std::vector<double> b_;
};

inline OfflineResult solve_lp(const PackingInstance& inst, const SimplexOptions& opt = {}) {
  std::vector<double> w(inst.n());
  for (std::size_t j = 0; j < inst.n(); ++j) w[j] = inst.columns[j].piece.linear_weight();
  OfflineResult res;
  if (inst.n() == 0) return res;
  DenseSimplex lp(inst.m, inst.n(), inst.dense(), inst.b);
  auto sol = lp.solve(w, opt);
  res.iterations = sol.pivots;
  if (!sol.ok) {
    res.status = SolveStatus::model_error;
    res.x_star.assign(inst.n(), 0.0);
    return res;
  }
  res.x_star = std::move(sol.x);
  res.opt_value = eval_objective(inst, res.x_star);
  return res;
}

struct FrankWolfeOptions {
  double tol = 1e-6;
  std::size_t max_iters = 5000;
  SimplexOptions lp{};
};

/// Conditional gradient with the open-loop step 2/(k+2). Every iterate is a
/// convex combination of LP vertices, hence feasible. Returns the best iterate.
///
/// A capped piece w min(z, cap) is handled as w z plus the extra LP row
/// z <= cap. Mass past the cap only uses capacity, so the optimum is the same,
/// and the objective loses its kink on the restricted domain.
inline OfflineResult solve_separable_concave(const PackingInstance& inst, const FrankWolfeOptions& opt = {}) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solve_separable_concave: tol must be > 0");
  const std::size_t n = inst.n();
  OfflineResult res;
  res.status = SolveStatus::not_converged;
  res.tolerance = opt.tol;
  res.x_star.assign(n, 0.0);
  if (n == 0) {
    res.status = SolveStatus::approximate;
    return res;
  }

  std::vector<std::size_t> capped;
  for (std::size_t j = 0; j < n; ++j)
    if (inst.columns[j].piece.kind() == std::string("capped")) capped.push_back(j);
  const std::size_t rows = inst.m + capped.size();
  std::vector<double> a = inst.dense();
  std::vector<double> b = inst.b;
  a.resize(rows * n, 0.0);
  for (std::size_t k = 0; k < capped.size(); ++k) {
    const auto& piece = std::get<CappedLinear>(inst.columns[capped[k]].piece.variant());
    a[(inst.m + k) * n + capped[k]] = 1.0;
    b.push_back(piece.cap);
  }
  DenseSimplex lp(rows, n, std::move(a), std::move(b));

  auto marginal = [&](std::size_t j, double z) {
    const auto& piece = inst.columns[j].piece;
    if (const auto* c = std::get_if<CappedLinear>(&piece.variant())) return c->weight;
    const double g = piece.marginal(z);
    // Infinite marginals (Power at 0) are evaluated just off the origin.
    return std::isfinite(g) ? g : piece.marginal(1e-12);
  };

  std::vector<double> x(n, 0.0), grad(n), dir(n);
  double best = 0.0;
  for (std::size_t k = 0; k < opt.max_iters; ++k) {
    double gmax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      grad[j] = marginal(j, x[j]);
      gmax = std::max(gmax, grad[j]);
    }
    if (gmax <= 0.0) {  // every piece saturated; x is optimal
      res.status = SolveStatus::approximate;
      res.gap = 0.0;
      break;
    }
    for (std::size_t j = 0; j < n; ++j) dir[j] = grad[j] / gmax;
    auto vertex = lp.solve(dir, opt.lp);
    if (!vertex.ok) {
      res.status = SolveStatus::model_error;
      break;
    }
    double gap = 0.0;
    for (std::size_t j = 0; j < n; ++j) gap += grad[j] * (vertex.x[j] - x[j]);
    const double fx = eval_objective(inst, x);
    res.iterations = k + 1;
    res.gap = gap;
    if (k > 0 && gap <= opt.tol * std::max(fx, 1e-300)) {
      res.status = SolveStatus::approximate;
      break;
    }
    const double step = 2.0 / (static_cast<double>(k) + 2.0);
    for (std::size_t j = 0; j < n; ++j) x[j] = std::max(0.0, x[j] + step * (vertex.x[j] - x[j]));
    const double fnew = eval_objective(inst, x);
    if (fnew > best || k == 0) {
      best = fnew;
      res.x_star = x;
    }
  }
  res.opt_value = eval_objective(inst, res.x_star);
  return res;
}

/// Solve whichever way the objective requires.
inline OfflineResult solve_offline(const PackingInstance& inst, const FrankWolfeOptions& opt = {}) {
  return inst.all_linear() ? solve_lp(inst, opt.lp) : solve_separable_concave(inst, opt);
}

/// Grid-search oracle for n <= 3. The first n-1 coordinates are gridded over
/// their feasible box; the last is pushed to its largest feasible value (exact
/// for a nondecreasing objective). One refinement pass at grid_step/10 runs
/// around the incumbent.
inline OfflineResult brute_force_opt(const PackingInstance& inst, double grid_step) {
  const std::size_t n = inst.n();
  if (n > 3) throw std::invalid_argument("brute_force_opt: n must be <= 3");
  if (!(grid_step > 0.0)) throw std::invalid_argument("brute_force_opt: grid_step must be > 0");
  OfflineResult res;
  res.status = SolveStatus::approximate;
  res.tolerance = grid_step;
  res.x_star.assign(n, 0.0);
  if (n == 0) return res;

  const std::size_t m = inst.m;
  const auto a = inst.dense();
  auto coef = [&](std::size_t i, std::size_t j) { return a[i * n + j]; };

  std::vector<double> ub(n, std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i)
      if (coef(i, j) > 0.0) ub[j] = std::min(ub[j], inst.b[i] / coef(i, j));

  std::vector<double> resid(m), x(n);
  double best = -1.0;
  std::vector<double> best_x(n, 0.0);

  // Evaluate prefix x[0..n-2] with the last coordinate saturated.
  auto evaluate = [&]() {
    for (std::size_t i = 0; i < m; ++i) {
      double r = inst.b[i];
      for (std::size_t j = 0; j + 1 < n; ++j) r -= coef(i, j) * x[j];
      if (r < -1e-12) return;
      resid[i] = std::max(0.0, r);
    }
    double last = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
      if (coef(i, n - 1) > 0.0) last = std::min(last, resid[i] / coef(i, n - 1));
    x[n - 1] = last;
    double f = 0.0;
    for (std::size_t j = 0; j < n; ++j) f += inst.columns[j].piece.value(x[j]);
    if (f > best) {
      best = f;
      best_x = x;
    }
  };

  // Grid over dims 0..n-2 on [lo_j, hi_j] with the given step; the upper end is always included.
  auto sweep = [&](const std::vector<double>& lo, const std::vector<double>& hi, double step) {
    const std::size_t d = n - 1;
    if (d == 0) {
      evaluate();
      return;
    }
    auto count = [&](std::size_t j) {
      return static_cast<std::size_t>(std::floor((hi[j] - lo[j]) / step + 1e-9)) + 1;
    };
    auto coord = [&](std::size_t j, std::size_t k) { return std::min(hi[j], lo[j] + step * static_cast<double>(k)); };
    const std::size_t n0 = count(0) + 1;
    for (std::size_t k0 = 0; k0 < n0; ++k0) {
      x[0] = k0 + 1 == n0 ? hi[0] : coord(0, k0);
      if (d == 1) {
        evaluate();
        continue;
      }
      // Skip the infeasible tail of the second coordinate.
      double cap1 = hi[1];
      for (std::size_t i = 0; i < m; ++i)
        if (coef(i, 1) > 0.0) cap1 = std::min(cap1, (inst.b[i] - coef(i, 0) * x[0]) / coef(i, 1));
      if (cap1 < lo[1]) continue;
      const std::size_t n1 = static_cast<std::size_t>(std::floor((cap1 - lo[1]) / step + 1e-9)) + 2;
      for (std::size_t k1 = 0; k1 < n1; ++k1) {
        x[1] = k1 + 1 == n1 ? cap1 : coord(1, k1);
        evaluate();
      }
    }
  };

  std::vector<double> lo(n, 0.0), hi = ub;
  sweep(lo, hi, grid_step);
  const auto incumbent = best_x;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    lo[j] = std::max(0.0, incumbent[j] - grid_step);
    hi[j] = std::min(ub[j], incumbent[j] + grid_step);
  }
  sweep(lo, hi, grid_step / 10.0);

  res.x_star = best_x;
  res.opt_value = std::max(0.0, best);
  return res;
}

}  // namespace olpack
