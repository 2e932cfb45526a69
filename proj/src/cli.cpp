#include "flowtop/cli.hpp"

#include "flowtop/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace flowtop {

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::string format = "both";
  long seed = -1;
  long trials = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool config_required = true) {
  auto* config = cmd->add_option("--config", opt.config_path, "JSON config file");
  if (config_required) config->required();
  cmd->add_option("--seed", opt.seed, "override the config seed");
  cmd->add_option("--trials", opt.trials, "override the config trial count");
  cmd->add_option("--out", opt.out_dir, "output directory (default from config)");
  cmd->add_option("--format", opt.format, "which outputs to write")
      ->check(CLI::IsMember({"csv", "json", "both"}));
}

ExperimentConfig load_with_overrides(const CommonOptions& opt) {
  ExperimentConfig cfg = load_experiment_config(opt.config_path);
  if (opt.seed >= 0) cfg.seed = uint64_t(opt.seed);
  if (opt.trials > 0) cfg.trials = opt.trials;
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (cfg.out_dir.empty()) cfg.out_dir = ".";
  return cfg;
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FlowtopError("cannot write " + path);
  return out;
}

bool wants_json(const CommonOptions& opt) { return opt.format != "csv"; }
bool wants_csv(const CommonOptions& opt) { return opt.format != "json"; }

int run_simulate(const CommonOptions& opt) {
  const ExperimentConfig cfg = load_with_overrides(opt);
  const long n_steps =
      long(std::llround(std::ceil(cfg.horizon / cfg.dt - tol::kGridSnap)));
  const long stride = std::max<long>(1, n_steps / 1000);

  std::ofstream out = open_output(cfg.out_dir, "trajectories.csv");
  out << "trial,step,t";
  for (int c = 0; c < cfg.manifold.ambient_dim(); ++c) out << ",x" << c;
  out << "\n";

  char buf[32];
  for (long trial = 0; trial < cfg.trials; ++trial) {
    const FlowRealization r(
        cfg.field,
        sample_brownian_path(cfg.field->noise_dim(), cfg.horizon, cfg.dt, cfg.seed, trial));
    FlowCursor cursor(r, cfg.x0);
    for (long k = 0; k <= n_steps; k += stride) {
      cursor.advance_steps(k - cursor.step());
      out << trial << ',' << k << ',';
      std::snprintf(buf, sizeof buf, "%.17g", double(k) * cfg.dt);
      out << buf;
      for (int c = 0; c < cursor.point().coords.size(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", cursor.point().coords[c]);
        out << ',' << buf;
      }
      out << "\n";
    }
  }
  return 0;
}

int run_moment(const CommonOptions& opt) {
  const ExperimentConfig cfg = load_with_overrides(opt);
  if (cfg.sigma.image.empty())
    throw ConfigInvalid("moment needs a sigma fixture in the config");
  const CompactTangentSet l = tangent_set_from_map(cfg.sigma);
  const MomentIntegralReport report = moment_integral_estimate(
      cfg.field, l, cfg.horizon, cfg.dt, cfg.trials, derive_seed(cfg.seed, 7));

  if (wants_json(opt)) {
    std::ofstream out = open_output(cfg.out_dir, "report.json");
    write_moment_report_json(out, report);
  }
  if (wants_csv(opt)) {
    std::ofstream out = open_output(cfg.out_dir, "integrand.csv");
    write_integrand_csv(out, report);
  }
  return 0;
}

int run_lemma1(const CommonOptions& opt, const std::vector<double>& eps_grid) {
  const ExperimentConfig cfg = load_with_overrides(opt);
  const auto rows = run_lemma1_certificate(cfg, eps_grid);

  if (wants_json(opt)) {
    std::ofstream out = open_output(cfg.out_dir, "report.json");
    write_certificate_json(out, rows);
  }
  if (wants_csv(opt)) {
    std::ofstream out = open_output(cfg.out_dir, "certificate.csv");
    out << "epsilon,delta,p_hat,ci_lo,ci_hi\n";
    char buf[32];
    for (const auto& row : rows) {
      std::snprintf(buf, sizeof buf, "%.17g", row.epsilon);
      out << buf << ',';
      if (row.delta) {
        std::snprintf(buf, sizeof buf, "%.17g", *row.delta);
        out << buf;
      }
      std::snprintf(buf, sizeof buf, "%.17g", row.estimate.p_hat);
      out << ',' << buf;
      std::snprintf(buf, sizeof buf, "%.17g", row.estimate.ci_lo);
      out << ',' << buf;
      std::snprintf(buf, sizeof buf, "%.17g", row.estimate.ci_hi);
      out << ',' << buf << "\n";
    }
  }
  return 0;
}

int run_theorem(const CommonOptions& opt) {
  const ExperimentConfig cfg = load_with_overrides(opt);
  const TheoremReport report = run_theorem_experiment(cfg);

  if (wants_json(opt)) {
    std::ofstream out = open_output(cfg.out_dir, "report.json");
    write_theorem_report_json(out, report, cfg);
  }
  if (wants_csv(opt)) {
    std::ofstream out = open_output(cfg.out_dir, "trials.csv");
    write_trials_csv(out, report);
  }
  return 0;
}

// Negative-control suite with built-in fixtures: the torus winding loop that
// must keep its homotopy class, and the closed-manifold moment curve, plus
// the uniform-law arc measure on the circle.
struct ControlTrials {
  long torus = 200;
  long sphere = 120;
  long arc = 10000;
};

nlohmann::json torus_control(uint64_t seed, long trials) {
  const Manifold torus = Manifold::flat_torus(2);
  const FieldPtr field = make_torus_translation(torus, 0.25);
  Point offset{Vec::Zero(2)};
  offset.coords << 0.25, 0.5;
  const SphereMap loop = make_torus_winding_loop(torus, {1, 0}, 64, offset);
  const std::vector<long> winding0 = winding_number(loop);

  const double dt = 2e-3;
  const double delta = 0.05;
  const std::vector<double> probes = {0.5, 1.0, 1.5, 2.0};

  Ball cover;
  cover.center = Point{Vec::Zero(2)};
  cover.center.coords << 0.5, 0.5;
  cover.radius = 0.75;
  const Region k_region{{cover}};
  const PointSet k_samples = sample_region(torus, k_region, 8);

  long chains_ok = 0, preserved = 0, witnesses = 0;
  for (long trial = 0; trial < trials; ++trial) {
    const FlowRealization r(
        field, sample_brownian_path(field->noise_dim(), probes.back(), dt, seed, trial));
    const bool ok =
        stepwise_homotopy_chain(loop, r, probes.back(), delta, 8).ok();
    if (ok) ++chains_ok;

    std::vector<FlowCursor> cursors;
    for (const Point& p : loop.image) cursors.emplace_back(r, p);
    bool all_preserved = true;
    for (double t : probes) {
      SphereMap pushed = loop;
      for (std::size_t i = 0; i < cursors.size(); ++i) {
        cursors[i].advance_to_time(t);
        pushed.image[i] = cursors[i].point();
      }
      if (winding_number(pushed) != winding0) all_preserved = false;
      if (null_homotopy_witness(pushed, k_samples)) ++witnesses;
    }
    if (ok && all_preserved) ++preserved;
  }

  // The full pipeline must refuse to pick a time for an isometry.
  bool no_valid_time = false;
  {
    ExperimentConfig cfg;
    cfg.manifold = torus;
    cfg.field = field;
    cfg.sigma = loop;
    cfg.k_region = k_region;
    cfg.x0 = offset;
    cfg.t_grid = {0.5, 1.0, 1.5, 2.0};
    cfg.probe_times = {0.5, 1.0, 1.5, 2.0};
    cfg.delta = delta;
    cfg.dt = dt;
    cfg.horizon = 2.0;
    cfg.trials = std::min<long>(trials, 100);
    cfg.seed = derive_seed(seed, 11);
    cfg.thresholds.shrink_len = 0.3;
    try {
      run_theorem_experiment(cfg);
    } catch (const NoValidTime&) {
      no_valid_time = true;
    }
  }

  return nlohmann::json{
      {"trials", trials},
      {"probe_times_time", probes},
      {"chain_success_rate", trials > 0 ? double(chains_ok) / double(trials) : 0.0},
      {"winding_preserved_rate",
       chains_ok > 0 ? double(preserved) / double(chains_ok) : 0.0},
      {"witnesses_found", witnesses},
      {"no_valid_time", no_valid_time}};
}

nlohmann::json sphere_control(uint64_t seed, long trials) {
  const Manifold sphere = Manifold::sphere(2, 1.0);
  const FieldPtr field = make_sphere_gradient_frame(sphere);
  const SphereMap identity = make_icosphere_identity(sphere, 1);
  const CompactTangentSet l = tangent_set_from_map(identity);
  const MomentIntegralReport report =
      moment_integral_estimate(field, l, 3.0, 2e-3, trials, derive_seed(seed, 12), 0, 61);
  return nlohmann::json{{"trials", trials},
                        {"converged", report.converged},
                        {"tail_slope", report.tail_slope},
                        {"truncated_integral", report.truncated_integral}};
}

nlohmann::json arc_control(uint64_t seed, long trials) {
  const Manifold circle = Manifold::flat_torus(1);
  const FieldPtr field = make_torus_translation(circle, 1.0);

  ExperimentConfig cfg;
  cfg.manifold = circle;
  cfg.field = field;
  cfg.dt = 0.01;
  cfg.horizon = 2.5;
  cfg.trials = trials;
  cfg.seed = derive_seed(seed, 13);
  cfg.probe_times = {1.0, 1.5, 2.0, 2.5};

  Ball arc;
  arc.center = Point{Vec::Zero(1)};
  arc.center.coords << 0.5;
  arc.radius = 0.15;  // arc of length 0.3
  const Region k{{arc}};
  const MeasureEstimate est = estimate_invariant_measure(cfg, k, arc.center);

  const double target = 0.3;
  const double se = std::sqrt(target * (1.0 - target) / double(trials));
  return nlohmann::json{{"trials", trials},
                        {"arc_length_len", target},
                        {"mu_hat", est.mu_hat},
                        {"stationary", est.stationary},
                        {"within_3_se", std::abs(est.mu_hat - target) <= 3.0 * se}};
}

int run_controls(const std::string& out_dir, uint64_t seed, const ControlTrials& trials) {
  nlohmann::json report{{"torus", torus_control(seed, trials.torus)},
                        {"sphere_moment", sphere_control(seed, trials.sphere)},
                        {"arc_measure", arc_control(seed, trials.arc)}};
  std::ofstream out = open_output(out_dir.empty() ? "." : out_dir, "report.json");
  out << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"stochastic flow contractibility experiments"};
  app.require_subcommand(1);

  CommonOptions sim_opt, moment_opt, lemma_opt, theorem_opt;
  std::vector<double> eps_grid = {0.2, 0.1, 0.05};
  std::string controls_out = ".";
  long controls_seed = 2026;
  ControlTrials controls_trials;

  CLI::App* sim = app.add_subcommand("simulate", "raw flow trajectories to CSV");
  add_common(sim, sim_opt);
  CLI::App* moment = app.add_subcommand("moment", "moment integral report");
  add_common(moment, moment_opt);
  CLI::App* lemma = app.add_subcommand("lemma1", "exit-time certificate table");
  add_common(lemma, lemma_opt);
  lemma->add_option("--eps", eps_grid, "epsilon grid for the certificate")
      ->delimiter(',');
  CLI::App* theorem = app.add_subcommand("theorem", "full theorem pipeline");
  add_common(theorem, theorem_opt);
  CLI::App* controls = app.add_subcommand("controls", "negative control suite");
  controls->add_option("--out", controls_out, "output directory");
  controls->add_option("--seed", controls_seed, "master seed");
  controls->add_option("--torus-trials", controls_trials.torus, "torus loop trials");
  controls->add_option("--sphere-trials", controls_trials.sphere, "sphere moment trials");
  controls->add_option("--arc-trials", controls_trials.arc, "arc measure trials");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("flowtop");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) return run_simulate(sim_opt);
    if (moment->parsed()) return run_moment(moment_opt);
    if (lemma->parsed()) return run_lemma1(lemma_opt, eps_grid);
    if (theorem->parsed()) return run_theorem(theorem_opt);
    if (controls->parsed())
      return run_controls(controls_out, uint64_t(controls_seed), controls_trials);
  } catch (const ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NoValidTime& e) {
    std::cerr << "no valid time: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace flowtop
