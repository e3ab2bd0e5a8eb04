// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "olpack/olpack.hpp"
#include "test_support.hpp"

namespace {

using namespace olpack;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failures with a short description.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 5) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  std::size_t failures() const { return failures_; }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " violations: " + notes_};
  }

 private:
  std::size_t failures_ = 0;
  std::string notes_;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

bool near(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

// 1. Switching invariants over random instances, subroutines and advice.
Outcome criterion1() {
  Checker c;
  testing::Gen g(20240601);
  const char* subs[] = {"greedy", "price", "knapsack-threshold"};
  for (int k = 0; k < 500; ++k) {
    const auto inst = g.instance(g.integer(1, 20), g.integer(1, 20), false);
    std::vector<double> adv(inst.n(), 0.0);
    const int family = k % 3;
    if (family == 0) {
      const auto opt = solve_offline(inst);
      adv = corrupt_replacement(opt.x_star, g.uniform(0, 1), derive_seed(1, k, 0));
    } else if (family == 1) {
      for (auto& v : adv) v = g.uniform(0, 3);
    }
    SubroutineConfig cfg;
    cfg.name = subs[(k / 3) % 3];
    cfg.knapsack = KnapsackOptions{g.integer(0, inst.m - 1), 0.1, 50.0};
    auto sub = make_subroutine(cfg, inst.m, inst.b);
    const auto tr = run_switching(inst, adv, sub, ReportedBeta{});
    const std::string tag = "run " + std::to_string(k) + " (" + cfg.name + ")";

    const auto x = tr.combined();
    const auto trim = trimmed_advice(tr);
    bool recurrence = true;
    for (const auto& r : tr.rounds) {
      const double want = r.used ? (r.sub + r.advice) / 2 : r.sub;
      recurrence = recurrence && std::abs(r.combined - want) <= 1e-12;
    }
    c.expect(recurrence, tag + ": round recurrence");
    c.expect(tr.f_combined >= tr.f_sub / 2 - 1e-9, tag + ": f(x) < f(x^O)/2");
    if (tr.advice_always_used()) c.expect(tr.f_combined >= tr.f_advice / 2 - 1e-9, tag + ": f(x) < f(x')/2");
    const auto lt = loads(inst, trim);
    for (std::size_t i = 0; i < inst.m; ++i)
      c.expect(lt[i] <= tr.final_beta() * inst.b[i] / 2 + 1e-9, tag + ": trimmed advice load");
    c.expect(violation_factor(loads(inst, x), inst.b) <=
                 violation_factor(loads(inst, tr.sub()), inst.b) + tr.final_beta() / 2 + 1e-9,
             tag + ": violation composition");
  }
  return c.outcome("500 runs, all five invariants hold");
}

// 2. Offline solvers against the grid oracle.
Outcome criterion2() {
  Checker c;
  testing::Gen g(777);
  const double h = 1e-3;
  double worst_lp = 0, worst_fw = 0;
  for (int k = 0; k < 100; ++k) {
    const auto inst = g.instance(g.integer(1, 3), g.integer(1, 3), true, 0.7, 0.2, 1.0);
    const auto lp = solve_lp(inst);
    const auto bf = brute_force_opt(inst, h);
    const double tol = 2 * h * static_cast<double>(inst.n());
    worst_lp = std::max(worst_lp, std::abs(lp.opt_value - bf.opt_value));
    c.expect(lp.status == SolveStatus::optimal && std::abs(lp.opt_value - bf.opt_value) <= tol,
             "linear " + std::to_string(k) + ": |" + num(lp.opt_value) + " - " + num(bf.opt_value) + "|");
  }
  for (int k = 0; k < 100; ++k) {
    const auto inst = g.instance(g.integer(1, 3), g.integer(1, 3), false, 0.7, 0.2, 1.0);
    const auto fw = solve_separable_concave(inst);
    const auto bf = brute_force_opt(inst, h);
    const double tol = 1e-6 + 2 * h * static_cast<double>(inst.n());
    worst_fw = std::max(worst_fw, std::abs(fw.opt_value - bf.opt_value));
    c.expect(std::abs(fw.opt_value - bf.opt_value) <= tol,
             "concave " + std::to_string(k) + ": |" + num(fw.opt_value) + " - " + num(bf.opt_value) + "|");
    const auto l = loads(inst, fw.x_star);
    bool feasible = std::all_of(fw.x_star.begin(), fw.x_star.end(), [](double v) { return v >= 0; });
    for (std::size_t i = 0; i < inst.m; ++i) feasible = feasible && l[i] <= inst.b[i] + 1e-9;
    c.expect(feasible, "concave " + std::to_string(k) + ": infeasible");
  }
  return c.outcome("max gap linear " + num(worst_lp) + ", concave " + num(worst_fw));
}

// 3. Reported beta covers the price rule's actual violation.
Outcome criterion3() {
  Checker c;
  double worst = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const auto inst = gen_synthetic(100, 0.01, derive_seed(33, k, 0));
    PricePacking p(inst.m, inst.b, PriceOptions{1.0, 1.0});
    run_subroutine(p, inst.columns);
    const double v = violation_factor(p.state().loads(), inst.b);
    worst = std::max(worst, v / p.beta());
    c.expect(v <= p.beta(), "trial " + std::to_string(k) + ": V " + num(v) + " > beta " + num(p.beta()));
  }
  return c.outcome("200 trials, max V/beta = " + num(worst));
}

ExperimentConfig experiment_config(std::size_t trials) {
  ExperimentConfig cfg;
  cfg.n = 100;
  cfg.trials = trials;
  cfg.seed = 2024;
  cfg.subroutine.name = "price";
  return cfg;
}

// 4. Replacement-rate sweep shape.
Outcome criterion4() {
  Checker c;
  const auto cfg = experiment_config(200);
  const auto rows = run_experiment_replacement(cfg);
  std::string table;
  for (double p : cfg.p_grid) {
    table += " p=" + num(p) + ":" + num(lookup_mean(rows, p, "advice")) + "/" + num(lookup_mean(rows, p, "subroutine")) +
             "/" + num(lookup_mean(rows, p, "switching"));
  }
  for (std::size_t k = 1; k < cfg.p_grid.size(); ++k)
    c.expect(lookup_mean(rows, cfg.p_grid[k], "advice") <= lookup_mean(rows, cfg.p_grid[k - 1], "advice") + 0.02,
             "advice increases at p=" + num(cfg.p_grid[k]));
  for (double p : {0.75, 1.0})
    c.expect(lookup_mean(rows, p, "switching") >= lookup_mean(rows, p, "advice"),
             "switching below advice at p=" + num(p));
  c.expect(lookup_mean(rows, 1.0, "switching") > 0.0, "switching is 0 at p=1");
  return c.outcome("advice/subroutine/switching" + table);
}

// 5. Drifting-matrix ordering at the last step.
Outcome criterion5() {
  auto judge = [](std::size_t trials, std::string& line) {
    auto cfg = experiment_config(trials);
    cfg.horizon = 20;
    const auto rows = run_experiment_dynamic(cfg);
    const double t = 20;
    const double b = lookup_mean(rows, t, "batch"), o = lookup_mean(rows, t, "online"),
                 s = lookup_mean(rows, t, "subroutine"), po = lookup_mean(rows, t, "partial-online");
    line = std::to_string(trials) + " trials: batch " + num(b) + ", online " + num(o) + ", subroutine " + num(s) +
           ", partial-online " + num(po);
    std::vector<std::string> broken;
    if (!(b <= o + 0.02)) broken.push_back("batch > online");
    if (!(o <= s + 0.02)) broken.push_back("online > subroutine");
    if (!(s <= po + 0.02)) broken.push_back("subroutine > partial-online");
    for (const auto& x : broken) line += " [" + x + "]";
    return broken.empty();
  };
  std::string first, second;
  if (judge(200, first)) return {true, first};
  const bool ok = judge(1000, second);
  return {ok, first + " | escalated to " + second};
}

// 6. Hand-traced fixtures.
Outcome criterion6() {
  Checker c;
  const auto e1 = testing::e1();
  auto trace = [&](std::vector<double> adv) {
    GreedySaturate g(e1.m, e1.b);
    return run_switching(e1, adv, g, FixedBeta{1.0});
  };
  {
    SwitchState s(e1.b);
    const auto r = s.round(e1.columns[0], 2.0, 2.0, 1.0);
    c.expect(r.used && near(r.combined, 2.0), "E1 round with advice 2");
    SwitchState t(e1.b);
    const auto q = t.round(e1.columns[0], 4.0, 2.0, 1.0);
    c.expect(!q.used && near(q.combined, 2.0), "E1 round with advice 4");
  }
  const auto opt = solve_lp(e1);
  c.expect(near(opt.opt_value, 2.0) && near(opt.x_star[0], 2.0) && near(opt.x_star[1], 0.0), "E1 LP");
  const auto good = trace({2.0, 0.0});
  c.expect(near(good.combined()[0], 2.0) && near(good.combined()[1], 0.0) && near(good.f_combined, 2.0),
           "E1 optimal advice trace");
  const auto q1 = quality(good, opt, e1);
  c.expect(near(q1.robustness.value, 1.0) && near(q1.violation, 1.0), "E1 quality R=1 V=1");
  const auto zero = trace({0.0, 0.0});
  c.expect(near(zero.combined()[0], 1.0) && near(zero.combined()[1], 0.0) && near(zero.f_combined, 1.0),
           "E1 zero advice trace");
  const auto q0 = quality(zero, opt, e1);
  c.expect(q0.consistency.degenerate && near(q0.robustness.value, 2.0) && near(q0.violation, 0.5),
           "E1 zero advice quality");
  const auto big = trimmed_advice(trace({4.0, 0.0}));
  c.expect(near(big[0], 0.0) && near(big[1], 0.0), "E1 trimmed advice (4,0)");
  {
    PricePacking p(e1.m, e1.b);
    c.expect(std::abs(p.observe(e1.columns[0]) - 3.169925001442312) <= 1e-6, "E1 price crossing");
  }
  {
    PackingInstance one;
    one.m = 1;
    one.b = {1.0};
    one.columns = {Column{{{0, 1.0}}, Linear{1}}, Column{{{0, 1.0}}, Linear{1}}};
    GreedySaturate g(one.m, one.b);
    const std::vector<double> adv{1.2, 0.3};
    const auto tr = run_switching(one, adv, g, ScheduledBeta{{1.0, 2.0}});
    c.expect(!tr.rounds[0].used && tr.rounds[1].used && near(tr.load_advice[0], 1.5), "re-admission schedule");
  }

  const double h = 1e-3;
  c.expect(near(brute_force_opt(build_knapsack({{{1.0, 2.0}}, 1.0, true}), h).opt_value, 0.5), "knapsack box on");
  {
    const auto r = brute_force_opt(build_knapsack({{{2.0, 1.0}, {3.0, 1.0}}, 1.0, false}), h);
    c.expect(near(r.opt_value, 3.0) && near(r.x_star[0], 0.0) && near(r.x_star[1], 3.0), "knapsack box off");
  }
  c.expect(build_knapsack({{}, 1.0, true}).n() == 0, "knapsack empty");
  {
    ThroughputSpec one;
    one.edges = {{"e", "s", "t", 1.0}};
    one.requests = {{"s", "t", {{"e"}}}};
    c.expect(near(brute_force_opt(build_throughput(one), h).opt_value, 1.0), "throughput single");
    one.requests.push_back({"t", "s", {{"e"}}});
    c.expect(near(brute_force_opt(build_throughput(one), h).opt_value, 1.0), "throughput shared edge");
    ThroughputSpec two;
    two.edges = {{"a", "s", "t", 1.0}, {"b", "s", "u", 1.0}, {"c", "u", "t", 1.0}};
    two.requests = {{"s", "t", {{"a"}, {"b", "c"}}}};
    c.expect(near(brute_force_opt(build_throughput(two), h).opt_value, 1.0), "throughput two paths");
  }
  {
    const auto r = brute_force_opt(build_ooic({{Log{1, 1}, Log{2, 1}}, 1.0}), h);
    c.expect(near(r.opt_value, 2 * std::log(2.0)) && near(r.x_star[0], 0.0) && near(r.x_star[1], 1.0), "ooic toy");
    c.expect(near(brute_force_opt(build_ooic({{Linear{1}, Linear{1}}, 1.0}), h).opt_value, 1.0), "ooic linear");
    const auto pw = brute_force_opt(build_ooic({{Power{1, 0.5}}, 4.0}), h);
    c.expect(near(pw.opt_value, 2.0) && near(pw.x_star[0], 4.0), "ooic power");
  }
  return c.outcome("all fixtures match");
}

// 7. CLI determinism: repeated runs and serial vs parallel trials.
Outcome criterion7() {
  namespace fs = std::filesystem;
  Checker c;
  const fs::path dir = fs::temp_directory_path() / ("olpack_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cli = OLPACK_CLI, samples = OLPACK_SAMPLES;

  auto sh = [&](const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " 2>/dev/null";
    return std::system(cmd.c_str());
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto same = [&](const std::string& name, const std::string& args_a, const std::string& args_b) {
    const fs::path a = dir / (name + "_a"), b = dir / (name + "_b");
    const int ra = sh(args_a + " --out \"" + a.string() + "\"");
    const int rb = sh(args_b + " --out \"" + b.string() + "\"");
    c.expect(ra == 0 && rb == 0, name + ": exit status");
    const auto ta = slurp(a), tb = slurp(b);
    c.expect(!ta.empty() && ta == tb, name + ": outputs differ");
  };

  same("gen", "gen --n 4 --seed 7", "gen --n 4 --seed 7");
  same("gen-spec", "gen --from-spec \"" + samples + "/knapsack.json\"",
       "gen --from-spec \"" + samples + "/knapsack.json\"");
  same("solve", "solve --instance \"" + samples + "/ooic.json\"", "solve --instance \"" + samples + "/ooic.json\"");
  same("run", "run --instance \"" + samples + "/e1.json\" --advice \"" + samples + "/e1_advice.csv\" --subroutine greedy",
       "run --instance \"" + samples + "/e1.json\" --advice \"" + samples + "/e1_advice.csv\" --subroutine greedy");
  same("run-p", "run --instance \"" + samples + "/throughput.json\" --advice-p 0.5 --seed 3",
       "run --instance \"" + samples + "/throughput.json\" --advice-p 0.5 --seed 3");
  const std::string sr = "sweep-replacement --n 30 --trials 12 --seed 5 --p-grid 0,0.5,1";
  same("sweep-replacement", sr, sr);
  same("sweep-replacement-threads", sr, sr + " --threads 4");
  const std::string sd = "sweep-dynamic --n 20 --trials 8 --horizon 4 --seed 5";
  same("sweep-dynamic", sd, sd);
  same("sweep-dynamic-threads", sd, sd + " --threads 4");
  same("plot", "plot --in \"" + (dir / "sweep-replacement_a").string() + "\"",
       "plot --in \"" + (dir / "sweep-replacement_a").string() + "\"");

  // the run trace on E1 with optimal advice ends at x = (2, 0)
  const auto trace = slurp(dir / "run_a");
  c.expect(trace.find("1,2,2,2,1,1,1\n2,0,0,0,1,1,1\n") != std::string::npos, "run: E1 trace rows");

  fs::remove_all(dir);
  return c.outcome("10 command pairs byte-identical");
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "switching invariants", 30, criterion1},
      {2, "offline oracle equivalence", 120, criterion2},
      {3, "beta-report validity", 120, criterion3},
      {4, "replacement-rate sweep", 300, criterion4},
      {5, "drifting-matrix ordering", 900, criterion5},
      {6, "hand-trace fixtures", 1, criterion6},
      {7, "CLI determinism", 600, criterion7},
  };
  int failed = 0;
  for (const auto& cr : all) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = cr.body();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs > cr.limit_s) {
      out.pass = false;
      out.detail += " (over the " + num(cr.limit_s) + " s limit)";
    }
    failed += !out.pass;
    std::cout << "criterion " << cr.id << " " << (out.pass ? "PASS" : "FAIL") << "  " << cr.name << "  ["
              << num(secs) << " s]  " << out.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
