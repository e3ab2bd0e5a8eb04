#pragma once

// Synthetic instances and the two evaluation experiments: a sweep over the
// replacement rate of corrupted optimal advice, and a drifting-matrix
// sequence compared under batch, online and partial-online predictions.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "olpack/advice.hpp"
#include "olpack/core.hpp"
#include "olpack/offline.hpp"
#include "olpack/random.hpp"
#include "olpack/scaling.hpp"
#include "olpack/subroutines.hpp"
#include "olpack/switching.hpp"

namespace olpack {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Entries of A uniform on [0, 1] and zeroed below ell, b uniform on (0, 1],
/// linear unit objective. Columns that come out all-zero are redrawn.
inline PackingInstance gen_synthetic(std::size_t n, double ell, std::uint64_t seed, std::size_t m = 0) {
  if (n == 0) throw ConfigError("gen_synthetic: n must be >= 1");
  if (!(ell > 0.0 && ell < 1.0)) throw ConfigError("gen_synthetic: ell must be in (0, 1)");
  if (m == 0) m = n;
  Rng rng(seed);
  PackingInstance inst;
  inst.m = m;
  inst.b.resize(m);
  inst.columns.resize(n);
  std::vector<double> dense(m);
  for (std::size_t j = 0; j < n; ++j) {
    bool any = false;
    while (!any) {
      for (std::size_t i = 0; i < m; ++i) {
        dense[i] = draw_entry(rng, ell);
        any = any || dense[i] > 0.0;
      }
    }
    auto& col = inst.columns[j];
    col.piece = Linear{1.0};
    for (std::size_t i = 0; i < m; ++i)
      if (dense[i] > 0.0) col.coeffs.push_back({i, dense[i]});
  }
  for (auto& bi : inst.b) bi = rng.uniform_open_closed();
  return inst;
}

struct ExperimentConfig {
  std::size_t n = 500;
  std::size_t m = 0;  // 0 means square
  double ell = 0.01;
  std::size_t trials = 1000;
  std::vector<double> p_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  std::size_t horizon = 20;
  std::optional<std::size_t> perturb_count;  // default 2n
  double partial_p = 0.5;
  SubroutineConfig subroutine{};
  BetaPolicy beta = ReportedBeta{};
  SwitchOptions switching{};
  ScaleMode scaling = ScaleMode::normalize;
  std::uint64_t seed = 1;
  std::size_t threads = 1;

  std::size_t perturbations() const { return perturb_count.value_or(2 * n); }

  void validate() const {
    if (n < 1) throw ConfigError("n must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (!(ell > 0.0 && ell < 1.0)) throw ConfigError("ell must be in (0, 1)");
    for (double p : p_grid)
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p-grid values must be in [0, 1]");
    if (!(partial_p >= 0.0 && partial_p <= 1.0)) throw ConfigError("partial-online p must be in [0, 1]");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    const std::size_t rows = m == 0 ? n : m;
    if (perturbations() > rows * n) throw ConfigError("perturbation count exceeds n*m");
    if (subroutine.name != "greedy" && subroutine.name != "price" && subroutine.name != "knapsack-threshold")
      throw ConfigError("unknown subroutine: " + subroutine.name);
    try {
      validate_beta_policy(beta);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
};

/// One aggregated cell of an experiment table.
struct SweepRow {
  double key = 0.0;  // p or t
  std::string arm;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t trials = 0;
};

/// Runs body(trial) for every trial on `threads` workers. Results are written
/// by trial index, so the merge order never depends on scheduling.
inline void for_each_trial(std::size_t trials, std::size_t threads, const std::function<void(std::size_t)>& body) {
  threads = std::max<std::size_t>(1, std::min(threads, trials));
  if (threads == 1) {
    for (std::size_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t t = next.fetch_add(1);
        if (t >= trials) return;
        try {
          body(t);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = trials;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

inline OfflineResult solve_or_throw(const PackingInstance& inst) {
  auto res = solve_lp(inst);
  if (res.status == SolveStatus::model_error) throw NumericError("offline LP exceeded its pivot limit");
  if (!(res.opt_value > 0.0)) throw NumericError("offline optimum is zero; ratios undefined");
  return res;
}

inline double scaled_or_throw(std::span<const double> x, const PackingInstance& inst, double opt, ScaleMode mode) {
  const auto r = ratio_after_scaling(x, inst, opt, mode);
  if (r.degenerate) throw NumericError("ratio after scaling undefined");
  return r.value;
}

/// Combined solution of a switching run driven by recorded subroutine output.
inline std::vector<double> replay_switching(const PackingInstance& inst, std::span<const double> advice,
                                            const SubroutineRun& run, const ExperimentConfig& cfg) {
  ReplaySubroutine replay(run.x, run.betas);
  return run_switching(inst, advice, replay, cfg.beta, cfg.switching).combined();
}

inline SubroutineRun run_configured_subroutine(const PackingInstance& inst, const SubroutineConfig& cfg) {
  auto sub = make_subroutine(cfg, inst.m, inst.b);
  return run_subroutine(sub, inst.columns);
}

inline const std::vector<std::string>& replacement_arms() {
  static const std::vector<std::string> arms{"advice", "subroutine", "switching"};
  return arms;
}

/// Replacement-rate sweep: rows ordered by p, then arm.
inline std::vector<SweepRow> run_experiment_replacement(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t np = cfg.p_grid.size();
  const std::size_t arms = replacement_arms().size();
  // ratios[trial][p * arms + arm]
  std::vector<std::vector<double>> ratios(cfg.trials, std::vector<double>(np * arms, 0.0));

  for_each_trial(cfg.trials, cfg.threads, [&](std::size_t trial) {
    const auto inst = gen_synthetic(cfg.n, cfg.ell, derive_seed(cfg.seed, trial, 0), cfg.m);
    const auto opt = solve_or_throw(inst);
    const auto run = run_configured_subroutine(inst, cfg.subroutine);
    const double sub_ratio = scaled_or_throw(run.x, inst, opt.opt_value, cfg.scaling);
    auto& out = ratios[trial];
    for (std::size_t k = 0; k < np; ++k) {
      const auto advice = corrupt_replacement(opt.x_star, cfg.p_grid[k], derive_seed(cfg.seed, trial, 1 + k));
      out[k * arms + 0] = eval_objective(inst, advice) / opt.opt_value;
      out[k * arms + 1] = sub_ratio;
      out[k * arms + 2] = scaled_or_throw(replay_switching(inst, advice, run, cfg), inst, opt.opt_value, cfg.scaling);
    }
  });

  std::vector<SweepRow> rows;
  std::vector<double> col(cfg.trials);
  for (std::size_t k = 0; k < np; ++k) {
    for (std::size_t a = 0; a < arms; ++a) {
      for (std::size_t t = 0; t < cfg.trials; ++t) col[t] = ratios[t][k * arms + a];
      rows.push_back({cfg.p_grid[k], replacement_arms()[a], mean_of(col), stderr_of(col), cfg.trials});
    }
  }
  return rows;
}

inline const std::vector<std::string>& dynamic_arms() {
  static const std::vector<std::string> arms{"batch", "online", "subroutine", "partial-online"};
  return arms;
}

/// Drifting-matrix experiment: rows ordered by t, then arm.
inline std::vector<SweepRow> run_experiment_dynamic(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t steps = cfg.horizon + 1;
  const std::size_t arms = dynamic_arms().size();
  const std::size_t count = cfg.perturbations();
  std::vector<std::vector<double>> ratios(cfg.trials, std::vector<double>(steps * arms, 0.0));

  for_each_trial(cfg.trials, cfg.threads, [&](std::size_t trial) {
    std::vector<PackingInstance> seq;
    seq.reserve(steps);
    seq.push_back(gen_synthetic(cfg.n, cfg.ell, derive_seed(cfg.seed, trial, 0), cfg.m));
    for (std::size_t t = 1; t < steps; ++t)
      seq.push_back(perturb_matrix(seq.back(), count, cfg.ell, derive_seed(cfg.seed, trial, t)).instance);

    std::vector<std::vector<double>> optima;
    std::vector<double> opt_values;
    for (const auto& inst : seq) {
      auto res = solve_or_throw(inst);
      opt_values.push_back(res.opt_value);
      optima.push_back(std::move(res.x_star));
    }
    const std::span<const std::vector<double>> opt_span(optima);
    const auto batch = make_prediction_sequence(opt_span, PredictionKind::batch, 0.0, 0);
    const auto online = make_prediction_sequence(opt_span, PredictionKind::online, 0.0, 0);
    const auto partial = make_prediction_sequence(opt_span, PredictionKind::partial_online, cfg.partial_p,
                                                  derive_seed(cfg.seed, trial, steps + 1));

    auto& out = ratios[trial];
    for (std::size_t t = 0; t < steps; ++t) {
      const auto& inst = seq[t];
      const double opt = opt_values[t];
      const auto run = run_configured_subroutine(inst, cfg.subroutine);
      out[t * arms + 0] = scaled_or_throw(replay_switching(inst, batch[t], run, cfg), inst, opt, cfg.scaling);
      out[t * arms + 1] = scaled_or_throw(replay_switching(inst, online[t], run, cfg), inst, opt, cfg.scaling);
      out[t * arms + 2] = scaled_or_throw(run.x, inst, opt, cfg.scaling);
      out[t * arms + 3] = scaled_or_throw(replay_switching(inst, partial[t], run, cfg), inst, opt, cfg.scaling);
    }
  });

  std::vector<SweepRow> rows;
  std::vector<double> col(cfg.trials);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t a = 0; a < arms; ++a) {
      for (std::size_t k = 0; k < cfg.trials; ++k) col[k] = ratios[k][t * arms + a];
      rows.push_back({static_cast<double>(t), dynamic_arms()[a], mean_of(col), stderr_of(col), cfg.trials});
    }
  }
  return rows;
}

/// Mean for (key, arm); throws if absent.
inline double lookup_mean(const std::vector<SweepRow>& rows, double key, const std::string& arm) {
  for (const auto& r : rows)
    if (r.key == key && r.arm == arm) return r.mean;
  throw std::out_of_range("no row for arm " + arm);
}

}  // namespace olpack
