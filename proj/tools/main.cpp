#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hlpareto/errors.hpp"
#include "hlpareto/io.hpp"
#include "hlpareto/oracle.hpp"
#include "hlpareto/problems.hpp"
#include "hlpareto/sweep.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hlpareto;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { ok = 0, usage = 1, nonconvergence = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool use_color() {
  return std::getenv("NO_COLOR") == nullptr && isatty(fileno(stdout));
}

std::string paint(const std::string& s, const char* code) {
  if (!use_color()) return s;
  return std::string("\033[") + code + "m" + s + "\033[0m";
}

std::string status_word(bool good, const std::string& s) {
  return paint(s, good ? "32" : "31");
}

Vector parse_vector(const std::string& text, const std::string& what) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      vals.push_back(io::parse_double(cell));
    } catch (const Error&) {
      throw UsageError(what + ": cannot parse '" + text + "'");
    }
  }
  if (vals.empty()) throw UsageError(what + ": empty vector");
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::string vector_text(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += io::format_double(v(i));
  }
  return out;
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

// Options shared by every verb that runs the solver.
struct RunOptions {
  std::string problem;
  double alpha = 0, c = 0, mu = 0;
  double rho = 0.5, sigma = 0.5, eta = 1.0, eps = 1e-5;
  int maxit = 100;
  double threshold = 1e-3;
  bool no_safeguard = false;
  std::string mode;
  std::string pref = "softmax";
  double temperature = 0;
  std::string weights;
  std::string config;

  CLI::Option* alpha_opt = nullptr;
  CLI::Option* c_opt = nullptr;
  CLI::Option* mu_opt = nullptr;
  CLI::Option* temperature_opt = nullptr;
};

void add_run_options(CLI::App* app, RunOptions& o) {
  app->add_option("--problem", o.problem, "problem id (see --list)");
  o.alpha_opt = app->add_option("--alpha", o.alpha, "Hopf-Lax time alpha > 0");
  o.c_opt = app->add_option("--c", o.c, "terminal-cost weight c > 0");
  o.mu_opt = app->add_option("--mu", o.mu, "regularization mu > 0");
  app->add_option("--rho", o.rho, "dual step")->capture_default_str();
  app->add_option("--sigma", o.sigma, "multiplier step")->capture_default_str();
  app->add_option("--eta", o.eta, "primal damping in (0,1]")->capture_default_str();
  app->add_option("--eps", o.eps, "stopping tolerance")->capture_default_str();
  app->add_option("--maxit", o.maxit, "outer iteration cap")->capture_default_str();
  app->add_option("--threshold", o.threshold, "active-set threshold")->capture_default_str();
  app->add_flag("--no-safeguard", o.no_safeguard, "disable merit backtracking");
  app->add_option("--mode", o.mode, "u-subproblem: lm | pg (default: per problem)")
      ->check(CLI::IsMember({"lm", "pg"}));
  app->add_option("--pref", o.pref, "softmax | weighted | chebyshev")
      ->check(CLI::IsMember({"softmax", "weighted", "chebyshev"}))
      ->capture_default_str();
  o.temperature_opt = app->add_option("--temperature", o.temperature, "softmax temperature");
  app->add_option("--weights", o.weights, "weights for weighted/chebyshev, comma separated");
  app->add_option("--config", o.config, "JSON config (or manifest.json); flags win");
}

// Values from the config file fill options not given on the command line.
void merge_config(CLI::App* app, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
  if (j.contains("config")) j = j["config"];
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = app->get_option_no_throw("--" + key);
    if (!opt) throw UsageError("config: unknown key '" + key + "'");
    if (opt->count() > 0) continue;
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_boolean()) {
      if (!value.get<bool>()) continue;
      text = "true";
    } else if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) text += ',';
        text += value[i].is_string() ? value[i].get<std::string>() : value[i].dump();
      }
    } else if (value.is_null()) {
      continue;
    } else {
      text = value.dump();
    }
    opt->add_result(text);
    opt->run_callback();
  }
}

struct Resolved {
  MooProblem problem;
  PreferenceFunction g;
  ConstrainedSolverConfig solver;
  double alpha, c, mu;
};

MooProblem load_problem(const std::string& id) {
  try {
    return problems::by_id(id);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

Resolved resolve(const RunOptions& o) {
  if (o.problem.empty()) throw UsageError("--problem is required");
  MooProblem p = load_problem(o.problem);
  const ProblemDefaults& d = p.defaults;
  const double alpha = o.alpha_opt->count() ? o.alpha : d.alpha;
  const double c = o.c_opt->count() ? o.c : d.c;
  const double mu = o.mu_opt->count() ? o.mu : d.mu;

  const int n = p.dim_obj();
  auto weights = [&] {
    if (o.weights.empty()) return Vector(Vector::Constant(n, 1.0 / n));
    Vector w = parse_vector(o.weights, "--weights");
    if (w.size() != n) throw UsageError("--weights needs one entry per objective");
    return w;
  };
  std::optional<PreferenceFunction> g;
  if (o.pref == "softmax") {
    g = PreferenceFunction::softmax(
        n, o.temperature_opt->count() ? o.temperature : d.softmax_eps);
  } else if (o.pref == "weighted") {
    g = PreferenceFunction::weighted_sum(weights());
  } else {
    g = PreferenceFunction::chebyshev(weights());
  }

  ConstrainedSolverConfig cfg;
  cfg.base.rho = o.rho;
  cfg.base.eta = o.eta;
  cfg.base.eps = o.eps;
  cfg.base.maxit_outer = o.maxit;
  cfg.base.safeguard = !o.no_safeguard;
  cfg.sigma = o.sigma;
  cfg.active_threshold = o.threshold;
  cfg.mode = o.mode.empty() ? d.mode
             : o.mode == "pg" ? SubproblemMode::projected_gradient
                              : SubproblemMode::lm_step;
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return {std::move(p), *g, cfg, alpha, c, mu};
}

const char* mode_name(SubproblemMode m) {
  return m == SubproblemMode::lm_step ? "lm" : "pg";
}

json run_config_json(const RunOptions& o, const Resolved& r) {
  json j;
  j["problem"] = r.problem.id;
  j["alpha"] = r.alpha;
  j["c"] = r.c;
  j["mu"] = r.mu;
  j["rho"] = o.rho;
  j["sigma"] = o.sigma;
  j["eta"] = o.eta;
  j["eps"] = o.eps;
  j["maxit"] = o.maxit;
  j["threshold"] = o.threshold;
  j["no-safeguard"] = o.no_safeguard;
  j["mode"] = mode_name(r.solver.mode);
  j["pref"] = o.pref;
  if (r.g.kind() == PreferenceKind::softmax) {
    j["temperature"] = r.g.temperature();
  } else {
    j["weights"] = vector_text(r.g.weights());
  }
  return j;
}

SampleSource reference_source(const MooProblem& p, int grid, int mc,
                              std::uint64_t seed) {
  if (grid > 0) return SampleSource::grid(grid);
  if (mc >= 0) return SampleSource::monte_carlo(mc, seed);
  if (p.id != "ex1" && p.dim_u() == 2) return SampleSource::grid(150);
  return SampleSource::monte_carlo(20000, seed);
}

json source_json(const SampleSource& s) {
  json j;
  if (s.kind == SampleSource::Kind::grid) {
    j["kind"] = "grid";
    j["resolution"] = s.resolution;
  } else {
    j["kind"] = "monte_carlo";
    j["count"] = s.count;
    j["seed"] = s.seed;
  }
  return j;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory '" + dir.string() + "'");
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text, int n) {
  std::vector<std::pair<int, int>> out;
  if (text.empty()) {
    if (n >= 2) out.emplace_back(1, 2);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("--pairs: expected i:j, got '" + item + "'");
    int i = 0, j = 0;
    try {
      i = std::stoi(item.substr(0, colon));
      j = std::stoi(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("--pairs: expected i:j, got '" + item + "'");
    }
    if (i < 1 || j < 1 || i > n || j > n || i == j)
      throw UsageError("--pairs: indices must be distinct and in 1.." + std::to_string(n));
    out.emplace_back(i, j);
  }
  return out;
}

// ---- solve ----

struct SolveCmd {
  RunOptions run;
  std::string tau;
};

int cmd_solve(CLI::App* app, SolveCmd& cmd) {
  merge_config(app, cmd.run.config);
  Resolved r = resolve(cmd.run);
  if (cmd.tau.empty()) throw UsageError("--tau is required");
  const Vector tau = parse_vector(cmd.tau, "--tau");
  if (tau.size() != r.problem.dim_obj())
    throw UsageError("--tau needs one entry per objective");

  HopfLaxParams params = r.problem.params_at(tau);
  params.alpha = r.alpha;
  params.c = r.c;
  params.mu = r.mu;
  try {
    params.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const ConstraintSet k = r.problem.constraints ? *r.problem.constraints
                                                : ConstraintSet::none(r.problem.dim_u());
  const ConstrainedSolveResult res =
      solve_constrained(r.problem.objective, k, r.g, params, r.solver);

  json out;
  out["problem"] = r.problem.id;
  out["status"] = to_string(res.status);
  out["converged"] = res.converged;
  out["u_star"] = to_json(res.u_star);
  out["pi_star"] = to_json(res.pi_star);
  out["nu_star"] = to_json(res.nu_star);
  out["p_bar"] = to_json(res.p_bar);
  out["E_bar"] = to_json(res.E_bar);
  out["ell"] = to_json(r.problem.objective.eval(res.u_star));
  out["residual"] = res.final_residual();
  out["iterations"] = res.iterations;
  out["merit"] = res.final_merit();
  out["feasibility_violation"] = res.feasibility_violation;
  out["complementarity"] = res.complementarity;
  std::cout << out.dump(2) << '\n';
  return res.converged ? Exit::ok : Exit::nonconvergence;
}

// ---- sweep ----

struct SweepCmd {
  RunOptions run;
  int n = 50;
  std::string tau_start, tau_end;
  bool cold = false;
  int workers = 1;
  bool compare = false;
  int grid = 0;
  int mc = -1;
  std::uint64_t seed = 7;
  int envelope_weights = 0;
  std::string pairs;
  std::string out = ".";
};

void add_reference_options(CLI::App* app, int& grid, int& mc, std::uint64_t& seed) {
  app->add_option("--grid", grid, "reference: uniform grid with this many points per axis");
  app->add_option("--mc", mc, "reference: feasible Monte Carlo samples");
  app->add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
}

int default_envelope_weights(int n) { return n == 2 ? 41 : 5; }

struct Comparison {
  SampleCloud reference;
  SampleCloud envelope;
  json metrics;
};

void write_svgs(const fs::path& dir, const MooProblem& p, const ParetoFront& front,
                const std::optional<Comparison>& cmp, const std::string& pairs_text) {
  const int n = p.dim_obj();
  const auto solver_pts = front_objective_points(front);
  auto render = [&](int i, int j, const fs::path& file) {
    io::ScatterPlot plot;
    plot.title = p.id + ": Pareto front";
    plot.x_label = "objective " + std::to_string(i + 1);
    plot.y_label = "objective " + std::to_string(j + 1);
    if (cmp) {
      plot.layers.push_back({"reference", io::coordinate_pair(cmp->reference.points_obj, i, j),
                             "#9a9a9a", n == 2, 1.5});
      plot.layers.push_back({"convex envelope",
                             io::coordinate_pair(cmp->envelope.points_obj, i, j), "#1f77b4",
                             false, 2.5});
    }
    plot.layers.push_back({"solver", io::coordinate_pair(solver_pts, i, j), "#d62728", false, 3.0});
    open_output(file) << io::render_svg(plot);
  };
  if (n == 1) return;
  if (n == 2 && pairs_text.empty()) {
    render(0, 1, dir / "front.svg");
    return;
  }
  for (const auto& [i, j] : parse_pairs(pairs_text, n))
    render(i - 1, j - 1,
           dir / ("front_" + std::to_string(i) + "_" + std::to_string(j) + ".svg"));
}

int cmd_sweep(CLI::App* app, SweepCmd& cmd) {
  merge_config(app, cmd.run.config);
  Resolved r = resolve(cmd.run);
  const MooProblem& p = r.problem;
  if (cmd.n < 1) throw UsageError("--n must be at least 1");
  if (cmd.workers < 1) throw UsageError("--workers must be at least 1");
  TauPath path{p.defaults.tau_start, p.defaults.tau_end, cmd.n};
  if (!cmd.tau_start.empty()) path.start = parse_vector(cmd.tau_start, "--tau-start");
  if (!cmd.tau_end.empty()) path.end = parse_vector(cmd.tau_end, "--tau-end");
  if (path.start.size() != p.dim_obj() || path.end.size() != p.dim_obj())
    throw UsageError("tau endpoints need one entry per objective");
  if (!cmd.pairs.empty()) parse_pairs(cmd.pairs, p.dim_obj());

  const fs::path dir(cmd.out);
  ensure_directory(dir);

  SweepOptions opts;
  opts.solver = r.solver;
  opts.warm_start = !cmd.cold;
  opts.workers = cmd.workers;

  std::optional<Comparison> cmp;
  std::optional<ScalarizedMinimumOracle> m_oracle;
  SampleSource source = reference_source(p, cmd.grid, cmd.mc, cmd.seed);
  const auto t_oracle = std::chrono::steady_clock::now();
  if (cmd.compare) {
    SampleCloud cloud = sample_problem(p, source);
    if (cloud.empty()) throw EmptyReference("no feasible sample for problem '" + p.id + "'");
    cmp.emplace();
    cmp->reference = greedy_pareto_filter(cloud);
    const int nw = cmd.envelope_weights > 0 ? cmd.envelope_weights
                                            : default_envelope_weights(p.dim_obj());
    cmp->envelope = convex_envelope_front(p, nw, cmp->reference);
    m_oracle.emplace(p, r.g, std::move(cloud));
    opts.gap_oracle = m_oracle->as_function();
  }
  const double oracle_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_oracle).count();

  const auto t0 = std::chrono::steady_clock::now();
  const ParetoFront front = sweep(p, r.g, p.defaults.x, r.alpha, r.c, r.mu, path, opts);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  {
    auto file = open_output(dir / "front.csv");
    io::write_front_csv(file, front);
  }

  int stalled = 0, capped = 0;
  json per_sample = json::array();
  for (const auto& s : front.samples) {
    stalled += s.status == SolveStatus::stalled;
    capped += s.status == SolveStatus::max_iterations;
    per_sample.push_back({{"index", s.index},
                          {"status", to_string(s.status)},
                          {"iterations", s.iterations},
                          {"residual", s.residual},
                          {"merit", s.merit}});
  }
  const int converged = front.converged_count();

  json manifest;
  manifest["tool"] = "hlpareto";
  manifest["version"] = kVersion;
  manifest["command"] = "sweep";
  json config = run_config_json(cmd.run, r);
  config["n"] = cmd.n;
  config["tau-start"] = vector_text(path.start);
  config["tau-end"] = vector_text(path.end);
  config["cold"] = cmd.cold;
  config["workers"] = cmd.workers;
  config["compare"] = cmd.compare;
  if (cmd.compare) {
    if (source.kind == SampleSource::Kind::grid) {
      config["grid"] = source.resolution;
    } else {
      config["mc"] = source.count;
      config["seed"] = source.seed;
    }
  }
  if (!cmd.pairs.empty()) config["pairs"] = cmd.pairs;
  manifest["config"] = config;
  manifest["solver_mode"] = mode_name(r.solver.mode);
  manifest["preference"] = r.g.describe();
  manifest["x"] = to_json(p.defaults.x);
  manifest["duration_seconds"] = seconds;
  manifest["summary"] = {{"samples", front.samples.size()},
                         {"converged", converged},
                         {"stalled", stalled},
                         {"max_iterations", capped}};
  manifest["samples"] = per_sample;

  std::cout << p.id << ": " << converged << "/" << front.samples.size() << " "
            << status_word(converged == static_cast<int>(front.samples.size()), "converged")
            << " in " << seconds << " s\n";

  if (cmp) {
    const auto pts = front_objective_points(front);
    json metrics;
    metrics["reference_source"] = source_json(source);
    metrics["reference_points"] = cmp->reference.size();
    metrics["envelope_points"] = cmp->envelope.size();
    metrics["oracle_seconds"] = oracle_seconds;
    if (!pts.empty()) {
      const FrontDistance dist = front_distance(pts, cmp->reference.points_obj);
      metrics["forward_distance"] = dist.forward;
      metrics["backward_distance"] = dist.backward;
      metrics["hausdorff_distance"] = dist.hausdorff;
      metrics["nonconvexity_witness"] =
          nonconvexity_witness(pts, cmp->envelope.points_obj, 0.05);
      std::cout << "forward distance:   " << dist.forward << '\n'
                << "backward distance:  " << dist.backward << '\n'
                << "witness (0.05):     " << metrics["nonconvexity_witness"].get<int>() << '\n';
    }
    double worst_low = 0.0, worst_high = 0.0;
    int certified = 0, checked = 0;
    for (const auto& s : front.samples) {
      if (!s.gap) continue;
      ++checked;
      worst_low = std::min(worst_low, *s.gap);
      worst_high = std::max(worst_high, *s.gap - s.bregman_bound);
      if (*s.gap >= -1e-6 && *s.gap <= s.bregman_bound + 1e-6) ++certified;
    }
    metrics["gap_checked"] = checked;
    metrics["gap_certified"] = certified;
    std::cout << "gap certified:      " << certified << "/" << checked << " "
              << status_word(certified == checked, certified == checked ? "ok" : "violations")
              << '\n';
    manifest["metrics"] = metrics;
    {
    auto file = open_output(dir / "reference.csv");
    io::write_cloud_csv(file, cmp->reference);
  }
    {
    auto file = open_output(dir / "envelope.csv");
    io::write_cloud_csv(file, cmp->envelope);
  }
  }
  write_svgs(dir, p, front, cmp, cmd.pairs);
  open_output(dir / "manifest.json") << manifest.dump(2) << '\n';
  return converged > 0 ? Exit::ok : Exit::nonconvergence;
}

// ---- oracle ----

struct OracleCmd {
  std::string problem;
  int grid = 0;
  int mc = -1;
  std::uint64_t seed = 7;
  int envelope_weights = 0;
  std::string out = ".";
};

int cmd_oracle(OracleCmd& cmd) {
  const MooProblem p = load_problem(cmd.problem);
  if (cmd.grid < 0) throw UsageError("--grid must be positive");
  const SampleSource source = reference_source(p, cmd.grid, cmd.mc, cmd.seed);
  if (source.kind == SampleSource::Kind::monte_carlo && source.count < 1)
    throw EmptyReference("Monte Carlo reference needs at least one sample");
  const fs::path dir(cmd.out);
  ensure_directory(dir);

  const auto t0 = std::chrono::steady_clock::now();
  const SampleCloud reference = reference_front(p, source);
  const int nw = cmd.envelope_weights > 0 ? cmd.envelope_weights
                                          : default_envelope_weights(p.dim_obj());
  const SampleCloud envelope = convex_envelope_front(p, nw, reference);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  {
    auto file = open_output(dir / "reference.csv");
    io::write_cloud_csv(file, reference);
  }
  {
    auto file = open_output(dir / "envelope.csv");
    io::write_cloud_csv(file, envelope);
  }
  json manifest;
  manifest["tool"] = "hlpareto";
  manifest["version"] = kVersion;
  manifest["command"] = "oracle";
  manifest["config"] = {{"problem", p.id}, {"envelope-weights", nw}};
  if (source.kind == SampleSource::Kind::grid) {
    manifest["config"]["grid"] = source.resolution;
  } else {
    manifest["config"]["mc"] = source.count;
    manifest["config"]["seed"] = source.seed;
  }
  manifest["reference_source"] = source_json(source);
  manifest["reference_points"] = reference.size();
  manifest["envelope_points"] = envelope.size();
  manifest["duration_seconds"] = seconds;
  open_output(dir / "manifest.json") << manifest.dump(2) << '\n';
  std::cout << p.id << ": reference " << reference.size() << " points, envelope "
            << envelope.size() << " points\n";
  return Exit::ok;
}

// ---- check ----

struct CheckCmd {
  std::vector<std::string> problems;
  int n = 20;
  int mc = 20000;
  std::uint64_t seed = 7;
};

int cmd_check(CheckCmd& cmd) {
  if (cmd.problems.empty()) cmd.problems = {"ex1", "ex2a", "ex2b", "ex3a-d10", "ex3b"};
  bool all_ok = true;
  auto report = [&](const std::string& id, const std::string& what, bool good,
                    const std::string& detail) {
    all_ok = all_ok && good;
    std::cout << status_word(good, good ? "PASS" : "FAIL") << "  " << id << "  " << what
              << "  " << detail << '\n';
  };
  for (const auto& id : cmd.problems) {
    const MooProblem p = load_problem(id);
    const PreferenceFunction g = default_preference(p);
    SampleSource source = reference_source(p, 0, cmd.mc, cmd.seed);
    SampleCloud cloud = sample_problem(p, source);
    if (cloud.empty()) throw EmptyReference("no feasible sample for problem '" + id + "'");

    const auto fast = pareto_indices(cloud.points_obj);
    const auto slow = all_pairs_pareto_indices(cloud.points_obj);
    report(id, "filter equivalence", fast == slow,
           std::to_string(fast.size()) + " non-dominated of " + std::to_string(cloud.size()));

    ScalarizedMinimumOracle m_oracle(p, g, std::move(cloud));
    SweepOptions opts;
    opts.gap_oracle = m_oracle.as_function();
    const ParetoFront front = sweep_defaults(p, cmd.n, opts);

    double worst_increase = 0.0;
    int gap_ok = 0, checked = 0;
    for (const auto& s : front.samples) {
      worst_increase = std::max(worst_increase, s.max_merit_increase);
      if (!s.gap) continue;
      ++checked;
      if (*s.gap >= -1e-6 && *s.gap <= s.bregman_bound + 1e-6) ++gap_ok;
    }
    std::ostringstream inc;
    inc << "max increase " << worst_increase;
    report(id, "merit descent", worst_increase <= 1e-12, inc.str());
    report(id, "gap inequality", checked > 0 && gap_ok == checked,
           std::to_string(gap_ok) + "/" + std::to_string(checked) + " converged samples");
  }
  return all_ok ? Exit::ok : Exit::nonconvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pareto front tracing with a Hopf-Lax primal-dual solver"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list", list, "list problem ids");

  SolveCmd solve_cmd;
  CLI::App* solve_app = app.add_subcommand("solve", "single solve at one tau; JSON to stdout");
  add_run_options(solve_app, solve_cmd.run);
  solve_app->add_option("--tau", solve_cmd.tau, "tau, comma separated");

  SweepCmd sweep_cmd;
  CLI::App* sweep_app = app.add_subcommand("sweep", "trace the front along a tau path");
  add_run_options(sweep_app, sweep_cmd.run);
  sweep_app->add_option("--n", sweep_cmd.n, "samples on the path")->capture_default_str();
  sweep_app->add_option("--tau-start", sweep_cmd.tau_start, "path start (default per problem)");
  sweep_app->add_option("--tau-end", sweep_cmd.tau_end, "path end (default per problem)");
  sweep_app->add_flag("--cold", sweep_cmd.cold, "cold start every sample");
  sweep_app->add_option("--workers", sweep_cmd.workers, "threads for cold-start sweeps")
      ->capture_default_str();
  sweep_app->add_flag("--compare", sweep_cmd.compare,
                      "compute reference and envelope fronts and print metrics");
  add_reference_options(sweep_app, sweep_cmd.grid, sweep_cmd.mc, sweep_cmd.seed);
  sweep_app->add_option("--envelope-weights", sweep_cmd.envelope_weights,
                        "weights per simplex edge for the envelope");
  sweep_app->add_option("--pairs", sweep_cmd.pairs, "objective pairs to plot, e.g. 1:2,3:4");
  sweep_app->add_option("--out", sweep_cmd.out, "output directory")->capture_default_str();

  OracleCmd oracle_cmd;
  CLI::App* oracle_app = app.add_subcommand("oracle", "reference and convex-envelope fronts");
  oracle_app->add_option("--problem", oracle_cmd.problem, "problem id")->required();
  add_reference_options(oracle_app, oracle_cmd.grid, oracle_cmd.mc, oracle_cmd.seed);
  oracle_app->add_option("--envelope-weights", oracle_cmd.envelope_weights,
                         "weights per simplex edge for the envelope");
  oracle_app->add_option("--out", oracle_cmd.out, "output directory")->capture_default_str();

  CheckCmd check_cmd;
  CLI::App* check_app =
      app.add_subcommand("check", "gap inequality, merit descent and filter equivalence");
  check_app->add_option("--problem", check_cmd.problems, "problem ids (default: benchmarks)");
  check_app->add_option("--n", check_cmd.n, "samples per sweep")->capture_default_str();
  check_app->add_option("--mc", check_cmd.mc, "reference samples")->capture_default_str();
  check_app->add_option("--seed", check_cmd.seed, "Monte Carlo seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::usage;
  }

  try {
    if (list) {
      for (const auto& id : problems::known_ids()) std::cout << id << '\n';
      return Exit::ok;
    }
    if (*solve_app) return cmd_solve(solve_app, solve_cmd);
    if (*sweep_app) return cmd_sweep(sweep_app, sweep_cmd);
    if (*oracle_app) return cmd_oracle(oracle_cmd);
    if (*check_app) return cmd_check(check_cmd);
    std::cerr << app.help();
    return Exit::usage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const CLI::App* sub : app.get_subcommands()) std::cerr << '\n' << sub->help();
    return Exit::usage;
  } catch (const EmptyReference& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::usage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::usage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::usage;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return Exit::nonconvergence;
  }
}
