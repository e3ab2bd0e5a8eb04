#pragma once

// Instance model for online concave packing:
//   maximize  sum_j g_j(x_j)   subject to  A x <= b,  x >= 0
// where column j of A (and its concave piece g_j) is revealed online.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace olpack {

struct Linear {
  double weight = 1.0;
};

// c * ln(1 + z / s)
struct Log {
  double scale = 1.0;
  double stretch = 1.0;
};

// c * z^rho, rho in (0, 1]
struct Power {
  double scale = 1.0;
  double exponent = 1.0;
};

// min(w z, w q)
struct CappedLinear {
  double weight = 1.0;
  double cap = 1.0;
};

/// Per-variable concave, nondecreasing utility with g(0) = 0.
class ConcavePiece {
 public:
  using Variant = std::variant<Linear, Log, Power, CappedLinear>;

  ConcavePiece() = default;
  ConcavePiece(Linear p) : v_(p) {}
  ConcavePiece(Log p) : v_(p) {}
  ConcavePiece(Power p) : v_(p) {}
  ConcavePiece(CappedLinear p) : v_(p) {}

  double value(double z) const {
    return std::visit(
        [z](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Linear>) {
            return p.weight * z;
          } else if constexpr (std::is_same_v<T, Log>) {
            return p.scale * std::log1p(z / p.stretch);
          } else if constexpr (std::is_same_v<T, Power>) {
            return p.scale * std::pow(z, p.exponent);
          } else {
            return p.weight * std::min(z, p.cap);
          }
        },
        v_);
  }

  // Right derivative. Power with exponent < 1 is +inf at 0; CappedLinear is 0
  // from the cap onwards.
  double marginal(double z) const {
    return std::visit(
        [z](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Linear>) {
            return p.weight;
          } else if constexpr (std::is_same_v<T, Log>) {
            return p.scale / (p.stretch + z);
          } else if constexpr (std::is_same_v<T, Power>) {
            if (p.exponent == 1.0) return p.scale;
            if (z <= 0.0) return std::numeric_limits<double>::infinity();
            return p.scale * p.exponent * std::pow(z, p.exponent - 1.0);
          } else {
            return z < p.cap ? p.weight : 0.0;
          }
        },
        v_);
  }

  bool is_linear() const { return std::holds_alternative<Linear>(v_); }

  // Weight of a Linear piece; throws for other kinds.
  double linear_weight() const {
    if (const auto* p = std::get_if<Linear>(&v_)) return p->weight;
    throw std::invalid_argument("piece is not linear");
  }

  std::string kind() const {
    return std::visit(
        [](const auto& p) -> std::string {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Linear>) return "linear";
          else if constexpr (std::is_same_v<T, Log>) return "log";
          else if constexpr (std::is_same_v<T, Power>) return "power";
          else return "capped";
        },
        v_);
  }

  // Empty string when parameters are admissible.
  std::string parameter_error() const {
    return std::visit(
        [](const auto& p) -> std::string {
          using T = std::decay_t<decltype(p)>;
          auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
          if constexpr (std::is_same_v<T, Linear>) {
            return pos(p.weight) ? "" : "linear weight must be > 0";
          } else if constexpr (std::is_same_v<T, Log>) {
            return pos(p.scale) && pos(p.stretch) ? "" : "log scale and stretch must be > 0";
          } else if constexpr (std::is_same_v<T, Power>) {
            if (!pos(p.scale)) return "power scale must be > 0";
            return p.exponent > 0.0 && p.exponent <= 1.0 ? "" : "power exponent must be in (0, 1]";
          } else {
            return pos(p.weight) && pos(p.cap) ? "" : "capped weight and cap must be > 0";
          }
        },
        v_);
  }

  const Variant& variant() const { return v_; }

 private:
  Variant v_{Linear{}};
};

struct Entry {
  std::size_t row = 0;  // 0-based
  double value = 0.0;
};

struct Column {
  std::vector<Entry> coeffs;
  ConcavePiece piece;

  double coefficient(std::size_t row) const {
    for (const auto& e : coeffs)
      if (e.row == row) return e.value;
    return 0.0;
  }
};

struct PackingInstance {
  std::size_t m = 0;
  std::vector<double> b;
  std::vector<Column> columns;

  std::size_t n() const { return columns.size(); }

  std::vector<ConcavePiece> pieces() const {
    std::vector<ConcavePiece> out;
    out.reserve(columns.size());
    for (const auto& c : columns) out.push_back(c.piece);
    return out;
  }

  bool all_linear() const {
    return std::all_of(columns.begin(), columns.end(),
                       [](const Column& c) { return c.piece.is_linear(); });
  }

  // Row-major m x n dense copy of A.
  std::vector<double> dense() const {
    std::vector<double> a(m * n(), 0.0);
    for (std::size_t j = 0; j < n(); ++j)
      for (const auto& e : columns[j].coeffs) a[e.row * n() + j] = e.value;
    return a;
  }
};

inline double eval_objective(std::span<const ConcavePiece> pieces, std::span<const double> x) {
  if (pieces.size() != x.size()) throw std::invalid_argument("eval_objective: dimension mismatch");
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] >= 0.0)) throw std::invalid_argument("eval_objective: negative entry");
    total += pieces[j].value(x[j]);
  }
  return total;
}

inline double eval_objective(const PackingInstance& inst, std::span<const double> x) {
  if (inst.n() != x.size()) throw std::invalid_argument("eval_objective: dimension mismatch");
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] >= 0.0)) throw std::invalid_argument("eval_objective: negative entry");
    total += inst.columns[j].piece.value(x[j]);
  }
  return total;
}

/// A x over a prefix of columns.
inline std::vector<double> loads(std::span<const Column> columns, std::size_t m,
                                 std::span<const double> x) {
  if (columns.size() != x.size()) throw std::invalid_argument("loads: dimension mismatch");
  std::vector<double> out(m, 0.0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] == 0.0) continue;
    for (const auto& e : columns[j].coeffs) out[e.row] += e.value * x[j];
  }
  return out;
}

inline std::vector<double> loads(const PackingInstance& inst, std::span<const double> x) {
  return loads(inst.columns, inst.m, x);
}

/// max_i load_i / b_i; x is V-feasible iff this is <= V.
inline double violation_factor(std::span<const double> load, std::span<const double> b) {
  if (load.size() != b.size()) throw std::invalid_argument("violation_factor: dimension mismatch");
  double v = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) v = std::max(v, load[i] / b[i]);
  return v;
}

/// Running per-row max/min over strictly positive coefficients.
class KappaTracker {
 public:
  explicit KappaTracker(std::size_t m = 0) : max_(m, 0.0), min_(m, 0.0) {}

  void update(const Column& col) {
    for (const auto& e : col.coeffs) {
      if (!(e.value > 0.0)) continue;
      if (e.row >= max_.size()) {
        max_.resize(e.row + 1, 0.0);
        min_.resize(e.row + 1, 0.0);
      }
      if (max_[e.row] == 0.0) {
        max_[e.row] = min_[e.row] = e.value;
      } else {
        max_[e.row] = std::max(max_[e.row], e.value);
        min_[e.row] = std::min(min_[e.row], e.value);
      }
    }
  }

  std::size_t rows() const { return max_.size(); }
  bool seen(std::size_t i) const { return max_[i] > 0.0; }

  // 1 for rows with no positive entry yet.
  double kappa(std::size_t i) const { return seen(i) ? max_[i] / min_[i] : 1.0; }

  double kappa() const {
    double k = 1.0;
    for (std::size_t i = 0; i < rows(); ++i) k = std::max(k, kappa(i));
    return k;
  }

  double row_max(std::size_t i) const { return max_[i]; }
  double row_min(std::size_t i) const { return min_[i]; }

 private:
  std::vector<double> max_;
  std::vector<double> min_;
};

inline KappaTracker update_kappa(KappaTracker tracker, const Column& col) {
  tracker.update(col);
  return tracker;
}

struct Violation {
  std::string code;     // "nonpositive capacity", "unbounded-direction", ...
  std::string message;
};

/// Checks every instance invariant; never throws.
inline std::vector<Violation> validate_instance(const PackingInstance& inst) {
  std::vector<Violation> out;
  auto add = [&](std::string code, std::string msg) { out.push_back({std::move(code), std::move(msg)}); };

  if (inst.m == 0) add("no constraints", "m must be positive");
  if (inst.b.size() != inst.m)
    add("dimension mismatch", "b has " + std::to_string(inst.b.size()) + " entries, m = " + std::to_string(inst.m));
  for (std::size_t i = 0; i < inst.b.size(); ++i)
    if (!(inst.b[i] > 0.0) || !std::isfinite(inst.b[i]))
      add("nonpositive capacity", "b[" + std::to_string(i + 1) + "] must be > 0");

  for (std::size_t j = 0; j < inst.n(); ++j) {
    const auto& col = inst.columns[j];
    const std::string where = "column " + std::to_string(j + 1);
    bool positive = false;
    std::vector<bool> seen(inst.m, false);
    for (const auto& e : col.coeffs) {
      if (e.row >= inst.m) {
        add("row out of range", where + " references row " + std::to_string(e.row + 1));
        continue;
      }
      if (seen[e.row]) add("duplicate row", where + " repeats row " + std::to_string(e.row + 1));
      seen[e.row] = true;
      if (!(e.value >= 0.0) || !std::isfinite(e.value))
        add("negative coefficient", where + " has a negative or non-finite coefficient");
      if (e.value > 0.0) positive = true;
    }
    if (!positive) add("unbounded-direction", where + " has no positive coefficient");
    if (auto err = col.piece.parameter_error(); !err.empty()) add("bad piece", where + ": " + err);
  }
  return out;
}

}  // namespace olpack
