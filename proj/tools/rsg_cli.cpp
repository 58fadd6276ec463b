// rsg: command-line driver for the resource-sharing game solvers.
//
//   rsg nash     --scenario 1 --e1 2
//   rsg worst dpp --game games/hidden3.game --T 100000
//   rsg evaluate --game G --strategy S --mode vs-worst-case
//   rsg sweep    --scenario 1 --solver worst-explicit --e1-min 0.5 --e1-max 3 --e1-step 0.25
//
// Every option can also be set through an RSG_<OPTION> environment variable
// (upper case, dashes as underscores, e.g. RSG_SEED, RSG_E1_MAX).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rsg/rsg.hpp"

namespace {

using namespace rsg;

struct Common {
  int scenario = 1;
  double e1 = 1.0;
  std::string game_path;
  std::uint64_t seed = 0;
  std::size_t samples = 100000;
  unsigned threads = 1;
  std::string out;
};

std::string env_name(const std::string& flag) {
  std::string s = "RSG_";
  for (char c : flag) s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

template <class T>
CLI::Option* opt(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option("--" + name, target, help)->envname(env_name(name));
}

void add_common(CLI::App* app, Common& c, bool with_game) {
  opt(app, "seed", c.seed, "Root seed")->capture_default_str();
  opt(app, "samples", c.samples, "Monte Carlo samples per estimate")->capture_default_str();
  opt(app, "threads", c.threads, "Worker threads for Monte Carlo")->capture_default_str();
  opt(app, "out", c.out, "Write the table here instead of stdout");
  if (with_game) {
    opt(app, "scenario", c.scenario, "Preset 1, 2 or 3")->capture_default_str()->check(CLI::Range(1, 3));
    opt(app, "e1", c.e1, "Mean of resource 1 for the preset")->capture_default_str();
    opt(app, "game", c.game_path, "Game file (overrides --scenario)");
  }
}

McConfig mc_of(const Common& c) {
  McConfig mc;
  mc.samples = c.samples;
  mc.threads = c.threads;
  mc.rng = RngSpec{c.seed, 0};
  return mc;
}

/// Loads the game; any shared realization left out of the file is drawn
/// from its law with the run's seed.
GameInstance load_game(const Common& c) {
  if (c.game_path.empty()) return experiments::scenario_game(c.scenario, c.e1);
  auto gf = io::parse_game(io::read_file(c.game_path));
  if (gf.missing_z.empty()) return gf.game;
  std::vector<double> z = gf.game.z();
  Rng rng(RngSpec{c.seed, 0}, Lane::misc);
  const auto shared = gf.game.partition().shared();
  for (auto k : gf.missing_z) z[k - shared.begin] = gf.game.distribution(k).sample(rng);
  return GameInstance(gf.game.partition(), gf.game.distributions(), std::move(z));
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string join(const std::vector<double>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + fmt(v[i]);
  return s;
}

void print_stats(std::ostream& os, const char* label, const StrategyStats& s) {
  os << label << "_p," << join(s.p, ",") << '\n';
  if (!s.q.empty()) os << label << "_q," << join(s.q, ",") << '\n';
  if (!s.exact()) {
    os << label << "_p_stderr," << join(s.p_stderr, ",") << '\n';
    if (!s.q.empty()) os << label << "_q_stderr," << join(s.q_stderr, ",") << '\n';
  }
}

void run_nash(const Common& c, double epsilon) {
  const auto game = load_game(c);
  const auto rep = iterate_best_response(game, epsilon, mc_of(c));
  Output out(c.out);
  auto& os = out.os();
  os << "iterations," << rep.iterations << '\n';
  os << "iteration_budget," << rep.iteration_budget << '\n';
  os << "converged," << (rep.converged ? 1 : 0) << '\n';
  os << "utility_A," << fmt(expected_utility(rep.stats_a, rep.stats_b, game, Player::A)) << '\n';
  os << "utility_B," << fmt(expected_utility(rep.stats_b, rep.stats_a, game, Player::B)) << '\n';
  os << "H," << fmt(potential(rep.stats_a, rep.stats_b, game)) << '\n';
  print_stats(os, "A", rep.stats_a);
  print_stats(os, "B", rep.stats_b);
}

struct WorstOptions {
  std::string solver = "explicit";
  dpp::Config dpp;
  md::Config md;
  a1::P5Config p5;
  std::string diagnostics;
};

void run_worst(const Common& c, WorstOptions w) {
  const auto game = load_game(c);
  const auto mc = mc_of(c);
  Output out(c.out);
  auto& os = out.os();
  auto report = [&](const Strategy& s) {
    const auto r = worst_case_utility(s, game, mc);
    os << "worst_value," << fmt(r.value) << '\n' << "stderr," << fmt(r.std_error) << '\n';
    print_stats(os, "A", r.stats);
  };
  if (w.solver == "explicit") {
    if (game.partition().a != 0 || game.partition().b != 0) {
      throw std::invalid_argument("explicit solver needs a game where no player observes anything");
    }
    const auto sol = explicit_solution(game.expected());
    os << "support," << sol.support << '\n';
    report(make_simplex(sol.p));
  } else if (w.solver == "md") {
    w.md.seed = c.seed;
    const auto r = md::run_md(game, w.md);
    const auto b = md::md_error_bound(game, w.md.alpha, w.md.T, RngSpec{c.seed, 1});
    os << "error_bound," << fmt(b.value) << '\n';
    report(make_simplex(r.p));
  } else if (w.solver == "dpp") {
    w.dpp.seed = c.seed;
    w.dpp.record_diagnostics = !w.diagnostics.empty();
    const auto r = dpp::run(game, w.dpp);
    const auto bc = dpp::bound_constants(game, w.dpp);
    os << "guarantee_gap," << fmt(bc.rhs) << '\n';
    os << "queue_bound_violations," << r.diagnostics.bound_violations << '\n';
    os << "queue_max," << join(r.diagnostics.queue_max, ",") << '\n';
    if (!w.diagnostics.empty()) {
      std::ofstream d(w.diagnostics);
      if (!d) throw std::runtime_error("cannot write '" + w.diagnostics + "'");
      dpp::write_diagnostics_csv(d, r.diagnostics);
    }
    report(r.mixture);
  } else if (w.solver == "a1") {
    w.p5.seed = c.seed;
    w.p5.eval_samples = c.samples;
    const auto r = a1::solve_p5(game, w.p5);
    const auto s = a1::build_strategy_a1(r.p, game);
    os << "worst_value," << fmt(r.value) << '\n' << "stderr," << fmt(r.std_error) << '\n';
    os << "A_p," << join(r.p, ",") << '\n';
    os << "tau," << fmt(s.tau) << '\n';
  } else {
    throw std::invalid_argument("unknown solver '" + w.solver + "'");
  }
}

void run_evaluate(const Common& c, const std::string& strategy_path, const std::string& opponent_path,
                  const std::string& mode) {
  const auto game = load_game(c);
  const auto s = io::parse_strategy(io::read_file(strategy_path), game);
  const auto mc = mc_of(c);
  Output out(c.out);
  auto& os = out.os();
  if (mode == "stats") {
    print_stats(os, to_string(s.player), estimate_stats(s.strategy, game, s.player, mc));
  } else if (mode == "vs-worst-case") {
    if (s.player != Player::A) throw std::invalid_argument("vs-worst-case evaluates a strategy of player A");
    const auto r = worst_case_utility(s.strategy, game, mc);
    os << "worst_value," << fmt(r.value) << '\n' << "stderr," << fmt(r.std_error) << '\n';
  } else if (mode == "vs-strategy") {
    if (opponent_path.empty()) throw std::invalid_argument("vs-strategy needs --opponent");
    const auto o = io::parse_strategy(io::read_file(opponent_path), game);
    if (o.player == s.player) throw std::invalid_argument("both strategies are for the same player");
    const auto& sa = s.player == Player::A ? s : o;
    const auto& sb = s.player == Player::A ? o : s;
    const auto est = simulate_payoff(sa.strategy, sb.strategy, game, mc);
    McConfig mb = mc;
    mb.rng = substream(mc.rng, 1);
    const auto stats_a = estimate_stats(sa.strategy, game, Player::A, mc);
    const auto stats_b = estimate_stats(sb.strategy, game, Player::B, mb);
    os << "utility_A_simulated," << fmt(est.mean) << '\n' << "stderr," << fmt(est.std_error) << '\n';
    os << "utility_A," << fmt(expected_utility(stats_a, stats_b, game, Player::A)) << '\n';
    os << "utility_B," << fmt(expected_utility(stats_b, stats_a, game, Player::B)) << '\n';
  } else {
    throw std::invalid_argument("unknown mode '" + mode + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solvers for two-player resource-sharing games with asymmetric information"};
  app.require_subcommand(1);

  Common common;
  double epsilon = 1e-3;
  WorstOptions worst;
  std::string strategy_path, opponent_path, mode = "vs-worst-case";
  experiments::ScenarioSpec spec;
  std::string solver_name = "nash";

  auto add_solver_opts = [&](CLI::App* a) {
    opt(a, "V", worst.dpp.V, "DPP penalty weight")->capture_default_str();
    opt(a, "alpha", worst.dpp.alpha, "DPP step parameter")->capture_default_str();
    opt(a, "T", worst.dpp.T, "DPP iterations")->capture_default_str();
    opt(a, "md-alpha", worst.md.alpha, "Mirror-descent step parameter")->capture_default_str();
    opt(a, "md-T", worst.md.T, "Mirror-descent iterations")->capture_default_str();
    opt(a, "p5-alpha", worst.p5.alpha, "Step parameter for the a=1 solver")->capture_default_str();
    opt(a, "p5-T", worst.p5.T, "Iterations for the a=1 solver")->capture_default_str();
    opt(a, "delta", worst.p5.delta, "Lower bound on p1 for the a=1 solver")->capture_default_str();
  };

  auto* nash = app.add_subcommand("nash", "Iterated best response to an approximate equilibrium");
  add_common(nash, common, true);
  opt(nash, "epsilon", epsilon, "Improvement threshold")->capture_default_str();

  auto* worst_cmd = app.add_subcommand("worst", "Strategy for A maximizing its worst-case utility");
  add_common(worst_cmd, common, true);
  worst_cmd->add_option("solver", worst.solver, "explicit | dpp | md | a1")
      ->check(CLI::IsMember({"explicit", "dpp", "md", "a1"}))
      ->required();
  add_solver_opts(worst_cmd);
  opt(worst_cmd, "diagnostics", worst.diagnostics, "DPP: write per-iteration t,max_queue,action CSV here");

  auto* eval = app.add_subcommand("evaluate", "Evaluate a strategy file on a game");
  add_common(eval, common, true);
  opt(eval, "strategy", strategy_path, "Strategy file")->required();
  opt(eval, "opponent", opponent_path, "Opponent strategy file (vs-strategy)");
  opt(eval, "mode", mode, "vs-worst-case | vs-strategy | stats")
      ->capture_default_str()
      ->check(CLI::IsMember({"vs-worst-case", "vs-strategy", "stats"}));

  auto* sweep = app.add_subcommand("sweep", "Sweep E1 on a preset and print a CSV table");
  add_common(sweep, common, false);
  opt(sweep, "scenario", spec.scenario, "Preset 1, 2 or 3")->capture_default_str()->check(CLI::Range(1, 3));
  opt(sweep, "solver", solver_name, "nash | worst-explicit | worst-dpp | worst-md | worst-a1")
      ->capture_default_str()
      ->check(CLI::IsMember({"nash", "worst-explicit", "worst-dpp", "worst-md", "worst-a1"}));
  opt(sweep, "e1-min", spec.e1_min, "First E1")->capture_default_str();
  opt(sweep, "e1-max", spec.e1_max, "Last E1")->capture_default_str();
  opt(sweep, "e1-step", spec.e1_step, "E1 step")->capture_default_str();
  opt(sweep, "epsilon", epsilon, "Nash improvement threshold")->capture_default_str();
  opt(sweep, "reps", spec.repetitions, "Repetitions per sweep point")->capture_default_str();
  add_solver_opts(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*nash) {
      run_nash(common, epsilon);
    } else if (*worst_cmd) {
      run_worst(common, worst);
    } else if (*eval) {
      run_evaluate(common, strategy_path, opponent_path, mode);
    } else if (*sweep) {
      const std::pair<const char*, experiments::Solver> names[] = {
          {"nash", experiments::Solver::nash},
          {"worst-explicit", experiments::Solver::worst_explicit},
          {"worst-dpp", experiments::Solver::worst_dpp},
          {"worst-md", experiments::Solver::worst_md},
          {"worst-a1", experiments::Solver::worst_a1}};
      for (const auto& [n, s] : names) {
        if (solver_name == n) spec.solver = s;
      }
      spec.epsilon = epsilon;
      spec.dpp = worst.dpp;
      spec.md = worst.md;
      spec.p5 = worst.p5;
      spec.samples = common.samples;
      spec.threads = common.threads;
      spec.seed = common.seed;
      const auto table = experiments::run_scenario(spec);
      Output out(common.out);
      experiments::write_csv(out.os(), table);
    }
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
