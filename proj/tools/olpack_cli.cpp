// olpack: command-line driver for instance generation, offline solves,
// single switching runs, the two experiment sweeps and plotting.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "olpack/olpack.hpp"

namespace {

using namespace olpack;

constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

BetaPolicy parse_beta(const std::string& text) {
  if (text == "reported") return ReportedBeta{};
  if (text.rfind("fixed:", 0) == 0) {
    try {
      std::size_t used = 0;
      const double v = std::stod(text.substr(6), &used);
      if (used == text.size() - 6) return FixedBeta{v};
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("--beta must be 'reported' or 'fixed:<value>'");
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ConfigError("--p-grid: bad value '" + cell + "'");
    }
  }
  if (out.empty()) throw ConfigError("--p-grid is empty");
  return out;
}

ScaleMode parse_scaling(const std::string& text) {
  if (text == "normalize") return ScaleMode::normalize;
  if (text == "shrink") return ScaleMode::shrink;
  throw ConfigError("--scaling must be 'normalize' or 'shrink'");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else io::write_file(path, text);
}

// Options shared by every command that runs a subroutine.
struct RunOptions {
  std::string subroutine = "price";
  std::string beta = "reported";
  double B = 1.0;
  double c_beta = 1.0;
  double lower = 1.0;
  double upper = 100.0;
  std::size_t knapsack_row = 1;
  double mix = 0.5;
  double gate = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--subroutine", subroutine, "greedy | price | knapsack-threshold")->capture_default_str();
    cmd->add_option("--beta", beta, "reported | fixed:<v>")->capture_default_str();
    cmd->add_option("--B", B, "price rule trade-off parameter")->capture_default_str();
    cmd->add_option("--c-beta", c_beta, "constant in the reported beta")->capture_default_str();
    cmd->add_option("--L", lower, "knapsack density lower bound")->capture_default_str();
    cmd->add_option("--U", upper, "knapsack density upper bound")->capture_default_str();
    cmd->add_option("--knapsack-row", knapsack_row, "1-indexed knapsack capacity row")->capture_default_str();
    cmd->add_option("--mix", mix, "weight on the subroutine when advice is used")->capture_default_str();
    cmd->add_option("--gate", gate, "advice gate multiplier on beta")->capture_default_str();
  }

  SubroutineConfig subroutine_config() const {
    SubroutineConfig cfg;
    cfg.name = subroutine;
    cfg.price = {B, c_beta};
    if (knapsack_row < 1) throw ConfigError("--knapsack-row is 1-indexed");
    cfg.knapsack = {knapsack_row - 1, lower, upper};
    return cfg;
  }
  SwitchOptions switch_options() const { return {mix, gate}; }
};

struct SweepOptions {
  std::size_t n = 500;
  std::size_t m = 0;
  double ell = 0.01;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string scaling = "normalize";
  std::string out;

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", n, "columns (and rows unless --m)")->capture_default_str();
    cmd->add_option("--m", m, "rows for rectangular instances");
    cmd->add_option("--ell", ell, "entries below ell are zeroed")->capture_default_str();
    cmd->add_option("--trials", trials, "instances averaged")->capture_default_str();
    cmd->add_option("--seed", seed, "master seed")->capture_default_str();
    cmd->add_option("--threads", threads, "worker threads")->capture_default_str();
    cmd->add_option("--scaling", scaling, "normalize | shrink")->capture_default_str();
    cmd->add_option("--out", out, "output CSV (stdout if omitted)");
  }

  ExperimentConfig config(const RunOptions& run) const {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.ell = ell;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.scaling = parse_scaling(scaling);
    cfg.subroutine = run.subroutine_config();
    cfg.beta = parse_beta(run.beta);
    cfg.switching = run.switch_options();
    return cfg;
  }
};

int run_cli(int argc, char** argv) {
  CLI::App app{"Learning-augmented online concave packing simulator"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "emit a synthetic instance (or build one from an application spec)");
  std::size_t gen_n = 100, gen_m = 0;
  double gen_ell = 0.01;
  std::uint64_t gen_seed = 1;
  std::string gen_spec, gen_out;
  gen->add_option("--n", gen_n, "columns")->capture_default_str();
  gen->add_option("--m", gen_m, "rows (default: n)");
  gen->add_option("--ell", gen_ell, "entries below ell are zeroed")->capture_default_str();
  gen->add_option("--seed", gen_seed, "seed")->capture_default_str();
  gen->add_option("--from-spec", gen_spec, "knapsack/throughput/ooic spec file to build instead");
  gen->add_option("--out", gen_out, "output file (stdout if omitted)");

  // solve
  auto* solve = app.add_subcommand("solve", "offline optimum of an instance or application spec");
  std::string solve_in, solve_out;
  FrankWolfeOptions fw;
  solve->add_option("--instance", solve_in, "instance or spec file")->required();
  solve->add_option("--tol", fw.tol, "Frank-Wolfe relative gap tolerance")->capture_default_str();
  solve->add_option("--max-iters", fw.max_iters, "Frank-Wolfe iteration cap")->capture_default_str();
  solve->add_option("--out", solve_out, "output JSON (stdout if omitted)");

  // run
  auto* run = app.add_subcommand("run", "single switching run; writes the per-round trace CSV");
  std::string run_in, run_advice, run_out;
  double run_advice_p = -1.0;
  std::uint64_t run_seed = 1;
  RunOptions run_opts;
  run->add_option("--instance", run_in, "instance or spec file")->required();
  auto* adv_file = run->add_option("--advice", run_advice, "one-column advice CSV");
  run->add_option("--advice-p", run_advice_p, "use the offline optimum corrupted at this replacement rate")
      ->excludes(adv_file);
  run->add_option("--seed", run_seed, "seed for --advice-p")->capture_default_str();
  run->add_option("--out", run_out, "trace CSV (stdout if omitted)");
  run_opts.attach(run);

  // sweeps
  auto* sweep_r = app.add_subcommand("sweep-replacement", "competitive ratio against the advice replacement rate");
  SweepOptions sr_opts;
  RunOptions sr_run;
  std::string p_grid = "0,0.25,0.5,0.75,1";
  sr_opts.attach(sweep_r);
  sr_run.attach(sweep_r);
  sweep_r->add_option("--p-grid", p_grid, "comma-separated replacement rates")->capture_default_str();

  auto* sweep_d = app.add_subcommand("sweep-dynamic", "competitive ratio over a drifting constraint matrix");
  SweepOptions sd_opts;
  RunOptions sd_run;
  std::size_t horizon = 20;
  std::optional<std::size_t> perturb_count;
  double partial_p = 0.5;
  sd_opts.attach(sweep_d);
  sd_run.attach(sweep_d);
  sweep_d->add_option("--horizon", horizon, "last time step T")->capture_default_str();
  sweep_d->add_option("--perturb-count", perturb_count, "entries redrawn per step (default 2n)");
  sweep_d->add_option("--partial-p", partial_p, "replacement rate of the partial-online advice")->capture_default_str();

  // plot
  auto* plot = app.add_subcommand("plot", "render a sweep CSV as an SVG line chart");
  std::string plot_in, plot_out, plot_title;
  plot->add_option("--in", plot_in, "sweep CSV")->required();
  plot->add_option("--out", plot_out, "SVG file (stdout if omitted)");
  plot->add_option("--title", plot_title, "chart title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kConfigError;
  }

  try {
    if (*gen) {
      const auto inst = gen_spec.empty() ? gen_synthetic(gen_n, gen_ell, gen_seed, gen_m) : io::load_problem(gen_spec);
      emit(gen_out, io::instance_to_json(inst).dump() + "\n");
    } else if (*solve) {
      const auto inst = io::load_problem(solve_in);
      const auto res = solve_offline(inst, fw);
      emit(solve_out, io::offline_to_json(res).dump(2) + "\n");
      if (res.status == SolveStatus::model_error) return kNumericError;
    } else if (*run) {
      const auto inst = io::load_problem(run_in);
      const auto opt = solve_offline(inst);
      if (opt.status == SolveStatus::model_error) throw NumericError("offline solve failed");
      std::vector<double> advice;
      if (run_advice_p >= 0.0) advice = corrupt_replacement(opt.x_star, run_advice_p, run_seed);
      else if (!run_advice.empty()) advice = io::advice_from_csv(io::read_file(run_advice));
      else throw ConfigError("run needs --advice or --advice-p");
      if (advice.size() < inst.n()) throw ConfigError("advice shorter than the column stream");
      for (double v : advice)
        if (!(v >= 0.0)) throw ConfigError("advice entries must be nonnegative");

      auto sub = make_subroutine(run_opts.subroutine_config(), inst.m, inst.b);
      SwitchOptions sw = run_opts.switch_options();
      const auto trace = run_switching(inst, advice, sub, parse_beta(run_opts.beta), sw);
      emit(run_out, io::trace_to_csv(trace));
      const auto q = quality(trace, opt, inst);
      auto show = [](const Ratio& r) { return r.degenerate ? std::string("flagged") : io::fmt_double(r.value); };
      std::cerr << "f(x)=" << io::fmt_double(trace.f_combined) << " f(x_sub)=" << io::fmt_double(trace.f_sub)
                << " f(x_adv)=" << io::fmt_double(trace.f_advice) << " OPT=" << io::fmt_double(opt.opt_value)
                << " C=" << show(q.consistency) << " R=" << show(q.robustness)
                << " V=" << io::fmt_double(q.violation) << " beta=" << io::fmt_double(q.beta_bound)
                << " scaled=" << show(q.scaled) << "\n";
    } else if (*sweep_r) {
      auto cfg = sr_opts.config(sr_run);
      cfg.p_grid = parse_grid(p_grid);
      emit(sr_opts.out, io::sweep_to_csv(run_experiment_replacement(cfg), "p"));
    } else if (*sweep_d) {
      auto cfg = sd_opts.config(sd_run);
      cfg.horizon = horizon;
      if (perturb_count) cfg.perturb_count = perturb_count;
      cfg.partial_p = partial_p;
      emit(sd_opts.out, io::sweep_to_csv(run_experiment_dynamic(cfg), "t"));
    } else if (*plot) {
      const auto table = io::sweep_from_csv(io::read_file(plot_in));
      emit(plot_out, io::plot_svg(table, plot_title.empty() ? "mean ratio by " + table.key_name : plot_title));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
