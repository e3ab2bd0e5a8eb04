#pragma once

// Prediction generators: corrupted optima (replacement rate) and optima of
// earlier matrices in a slowly drifting sequence A_0, A_1, ...

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "olpack/core.hpp"
#include "olpack/offline.hpp"
#include "olpack/random.hpp"

namespace olpack {

/// Zeroes each entry independently with probability p.
inline std::vector<double> corrupt_replacement(std::span<const double> x_star, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("corrupt_replacement: p must be in [0, 1]");
  Rng rng(seed);
  std::vector<double> out(x_star.begin(), x_star.end());
  for (auto& v : out)
    if (rng.bernoulli(p)) v = 0.0;
  return out;
}

/// One entry of the synthetic matrix law: uniform on [0, 1], zeroed below ell.
inline double draw_entry(Rng& rng, double ell) {
  const double a = rng.uniform();
  return a < ell ? 0.0 : a;
}

struct Position {
  std::size_t row = 0;
  std::size_t col = 0;
};

struct Perturbation {
  PackingInstance instance;
  std::vector<Position> positions;  // redrawn entries, in draw order
};

/// Redraws `count` distinct entries of A, chosen uniformly without
/// replacement. b and the pieces are untouched. If a column would lose all of
/// its positive entries, its redrawn positions are drawn again.
inline Perturbation perturb_matrix(const PackingInstance& inst, std::size_t count, double ell, std::uint64_t seed) {
  const std::size_t m = inst.m, n = inst.n(), total = m * n;
  if (count > total) throw std::invalid_argument("perturb_matrix: count exceeds n*m");
  if (!(ell > 0.0 && ell < 1.0)) throw std::invalid_argument("perturb_matrix: ell must be in (0, 1)");
  Rng rng(seed);

  // Partial Fisher-Yates over flat indices (col * m + row); slots that have
  // been swapped are kept in a map so memory stays O(count).
  std::vector<std::size_t> picked;
  picked.reserve(count);
  std::unordered_map<std::size_t, std::size_t> moved;
  auto slot = [&](std::size_t k) {
    auto it = moved.find(k);
    return it == moved.end() ? k : it->second;
  };
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t r = k + rng.index(total - k);
    const std::size_t vk = slot(k), vr = slot(r);
    moved[r] = vk;
    picked.push_back(vr);
  }

  std::vector<double> a = inst.dense();  // row-major m x n
  Perturbation out;
  out.positions.reserve(count);
  std::vector<std::vector<std::size_t>> per_col(n);
  for (std::size_t flat : picked) {
    const Position pos{flat % m, flat / m};
    out.positions.push_back(pos);
    per_col[pos.col].push_back(pos.row);
    a[pos.row * n + pos.col] = draw_entry(rng, ell);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (per_col[j].empty()) continue;
    auto all_zero = [&] {
      for (std::size_t i = 0; i < m; ++i)
        if (a[i * n + j] > 0.0) return false;
      return true;
    };
    while (all_zero())
      for (std::size_t i : per_col[j]) a[i * n + j] = draw_entry(rng, ell);
  }

  out.instance.m = m;
  out.instance.b = inst.b;
  out.instance.columns.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto& col = out.instance.columns[j];
    col.piece = inst.columns[j].piece;
    for (std::size_t i = 0; i < m; ++i)
      if (a[i * n + j] > 0.0) col.coeffs.push_back({i, a[i * n + j]});
  }
  return out;
}

enum class PredictionKind { batch, online, partial_online };

inline const char* to_string(PredictionKind k) {
  switch (k) {
    case PredictionKind::batch: return "batch";
    case PredictionKind::online: return "online";
    case PredictionKind::partial_online: return "partial-online";
  }
  return "?";
}

/// Advice for every step t given the optima of A_0..A_T:
///   batch          -> OPT(A_0)
///   online         -> OPT(A_{t-1}), with OPT(A_0) at t = 0
///   partial-online -> online advice with entries zeroed at rate p; one mask
///                     per sequence, so the same coordinates drop at every t
inline std::vector<std::vector<double>> make_prediction_sequence(std::span<const std::vector<double>> optima,
                                                                 PredictionKind kind, double p, std::uint64_t seed) {
  std::vector<std::vector<double>> out;
  out.reserve(optima.size());
  for (std::size_t t = 0; t < optima.size(); ++t) {
    const auto& source = (kind == PredictionKind::batch || t == 0) ? optima[0] : optima[t - 1];
    if (kind == PredictionKind::partial_online)
      out.push_back(corrupt_replacement(source, p, seed));
    else
      out.push_back(source);
  }
  return out;
}

/// Same, solving each step's LP first.
inline std::vector<std::vector<double>> make_prediction_sequence(std::span<const PackingInstance> steps,
                                                                 PredictionKind kind, double p, std::uint64_t seed) {
  std::vector<std::vector<double>> optima;
  optima.reserve(steps.size());
  for (const auto& inst : steps) {
    if (!steps.empty() && (inst.b != steps[0].b || inst.n() != steps[0].n()))
      throw std::invalid_argument("make_prediction_sequence: steps must share b and n");
    auto res = solve_offline(inst);
    if (res.status == SolveStatus::model_error) throw std::runtime_error("make_prediction_sequence: LP failed");
    optima.push_back(std::move(res.x_star));
  }
  return make_prediction_sequence(std::span<const std::vector<double>>(optima), kind, p, seed);
}

}  // namespace olpack
