#pragma once

// Switching between advice and a black-box online subroutine. Each round the
// combined solution takes the average of the subroutine's value and the
// advice, unless the revealed advice prefix already breaks beta-feasibility,
// in which case it follows the subroutine alone.

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "olpack/core.hpp"
#include "olpack/offline.hpp"
#include "olpack/scaling.hpp"
#include "olpack/subroutines.hpp"

namespace olpack {

struct FixedBeta {
  double value = 1.0;
};
struct ReportedBeta {};
// Per-round values; the last one repeats past the end. Meant for tests.
struct ScheduledBeta {
  std::vector<double> values;
};

using BetaPolicy = std::variant<FixedBeta, ReportedBeta, ScheduledBeta>;

struct SwitchOptions {
  double mix = 0.5;   // weight on the subroutine when advice is used
  double gate = 1.0;  // advice admitted while its loads stay within gate * beta * b
};

struct RoundRecord {
  std::size_t j = 0;  // 1-based round
  double advice = 0.0;
  double sub = 0.0;
  double combined = 0.0;
  bool used = false;
  double beta = 1.0;
  double max_load_ratio = 0.0;  // violation factor of the combined prefix
};

struct SolutionTrace {
  std::vector<RoundRecord> rounds;
  std::vector<double> load_combined;
  std::vector<double> load_sub;
  std::vector<double> load_advice;
  double f_combined = 0.0;
  double f_sub = 0.0;
  double f_advice = 0.0;

  std::vector<double> combined() const { return pick(&RoundRecord::combined); }
  std::vector<double> sub() const { return pick(&RoundRecord::sub); }
  std::vector<double> advice() const { return pick(&RoundRecord::advice); }
  double final_beta() const { return rounds.empty() ? 1.0 : rounds.back().beta; }
  bool advice_always_used() const {
    return std::all_of(rounds.begin(), rounds.end(), [](const RoundRecord& r) { return r.used; });
  }

 private:
  std::vector<double> pick(double RoundRecord::*field) const {
    std::vector<double> out;
    out.reserve(rounds.size());
    for (const auto& r : rounds) out.push_back(r.*field);
    return out;
  }
};

/// Running loads of the combined solution, the subroutine and the advice prefix.
class SwitchState {
 public:
  SwitchState(std::vector<double> b, SwitchOptions opt = {})
      : b_(std::move(b)), opt_(opt), lx_(b_.size(), 0.0), lsub_(b_.size(), 0.0), ladv_(b_.size(), 0.0) {
    if (!(opt_.mix > 0.0 && opt_.mix < 1.0)) throw std::invalid_argument("switching: mix must be in (0, 1)");
    if (!(opt_.gate > 0.0)) throw std::invalid_argument("switching: gate must be > 0");
  }

  RoundRecord round(const Column& col, double advice, double sub, double beta) {
    if (!(advice >= 0.0)) throw std::invalid_argument("switching: negative advice entry");
    if (!(beta >= 1.0)) throw std::invalid_argument("switching: beta must be >= 1");

    bool within = true;
    for (const auto& e : col.coeffs) ladv_[e.row] += e.value * advice;
    for (std::size_t i = 0; i < b_.size(); ++i)
      if (ladv_[i] > opt_.gate * beta * b_[i]) within = false;

    RoundRecord r;
    r.j = ++rounds_;
    r.advice = advice;
    r.sub = sub;
    r.used = within;
    r.beta = beta;
    if (!within) r.combined = sub;
    else if (opt_.mix == 0.5) r.combined = (sub + advice) / 2;
    else r.combined = opt_.mix * sub + (1.0 - opt_.mix) * advice;

    for (const auto& e : col.coeffs) {
      lx_[e.row] += e.value * r.combined;
      lsub_[e.row] += e.value * sub;
    }
    r.max_load_ratio = violation_factor(lx_, b_);
    return r;
  }

  const std::vector<double>& load_combined() const { return lx_; }
  const std::vector<double>& load_sub() const { return lsub_; }
  const std::vector<double>& load_advice() const { return ladv_; }

 private:
  std::vector<double> b_;
  SwitchOptions opt_;
  std::vector<double> lx_, lsub_, ladv_;
  std::size_t rounds_ = 0;
};

inline double beta_for_round(const BetaPolicy& policy, std::size_t round0, double reported) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FixedBeta>) {
          return p.value;
        } else if constexpr (std::is_same_v<T, ReportedBeta>) {
          return reported;
        } else {
          if (p.values.empty()) throw std::invalid_argument("switching: empty beta schedule");
          return p.values[std::min(round0, p.values.size() - 1)];
        }
      },
      policy);
}

inline void validate_beta_policy(const BetaPolicy& policy) {
  if (const auto* f = std::get_if<FixedBeta>(&policy); f && !(f->value >= 1.0))
    throw std::invalid_argument("switching: fixed beta must be >= 1");
  if (const auto* s = std::get_if<ScheduledBeta>(&policy)) {
    if (s->values.empty()) throw std::invalid_argument("switching: empty beta schedule");
    for (double v : s->values)
      if (!(v >= 1.0)) throw std::invalid_argument("switching: scheduled beta must be >= 1");
  }
}

/// Runs the switching algorithm over the whole instance. Advice entries past
/// the last column are ignored.
template <OnlineSubroutine S>
SolutionTrace run_switching(const PackingInstance& inst, std::span<const double> advice, S& sub,
                            const BetaPolicy& policy, SwitchOptions opt = {}) {
  if (advice.size() < inst.n()) throw std::invalid_argument("switching: advice shorter than the column stream");
  for (std::size_t j = 0; j < inst.n(); ++j)
    if (!(advice[j] >= 0.0)) throw std::invalid_argument("switching: negative advice entry");
  validate_beta_policy(policy);

  SwitchState state(inst.b, opt);
  SolutionTrace trace;
  trace.rounds.reserve(inst.n());
  for (std::size_t j = 0; j < inst.n(); ++j) {
    const auto& col = inst.columns[j];
    const double xs = sub.observe(col);
    const double beta = beta_for_round(policy, j, sub.beta());
    trace.rounds.push_back(state.round(col, advice[j], xs, beta));
  }
  trace.load_combined = state.load_combined();
  trace.load_sub = state.load_sub();
  trace.load_advice = state.load_advice();
  trace.f_combined = eval_objective(inst, trace.combined());
  trace.f_sub = eval_objective(inst, trace.sub());
  trace.f_advice = eval_objective(inst, std::span<const double>(advice.data(), inst.n()));
  return trace;
}

/// Advice halved, with every entry the gate rejected set to 0.
inline std::vector<double> trimmed_advice(const SolutionTrace& trace) {
  std::vector<double> out;
  out.reserve(trace.rounds.size());
  for (const auto& r : trace.rounds) out.push_back(r.used ? r.advice / 2 : 0.0);
  return out;
}

struct QualityReport {
  Ratio consistency;  // f(x') / f(x)
  Ratio robustness;   // OPT / f(x)
  double violation = 0.0;
  double beta_bound = 1.0;  // beta under which the advice was judged
  Ratio scaled;             // f(x scaled to feasibility) / OPT
};

inline QualityReport quality(const SolutionTrace& trace, const OfflineResult& opt, const PackingInstance& inst) {
  QualityReport q;
  const double fx = trace.f_combined;
  q.consistency = (trace.f_advice > 0.0 && fx > 0.0) ? Ratio::of(trace.f_advice, fx) : Ratio::flagged();
  q.robustness = Ratio::of(opt.opt_value, fx);
  q.violation = violation_factor(loads(inst, trace.combined()), inst.b);
  q.beta_bound = trace.final_beta();
  q.scaled = ratio_after_scaling(trace.combined(), inst, opt.opt_value);
  return q;
}

}  // namespace olpack
