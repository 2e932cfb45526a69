#include "flowtop/experiment.hpp"
#include "flowtop/cli.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "test_util.hpp"

using namespace flowtop;
using testutil::pt;

namespace {

std::string contraction_config(long trials, const char* extra) {
  std::ostringstream os;
  os << R"({
  "manifold": {"kind": "euclidean", "dim": 2},
  "field": {"name": "linear_contraction", "lambda_rate": 1.0, "sigma_noise": 1.0},
  "sigma": {"fixture": "geodesic_circle", "center_coords": [0.0, 0.0], "rho_len": 0.5, "vertices": 12},
  "x0_coords": [0.0, 0.0],
  "k_region": {"balls": [{"center_coords": [0.0, 0.0], "radius_len": 2.0}]},
  "w_region": {"balls": [{"center_coords": [0.0, 0.0], "radius_len": 3.0}]},
  "t_grid_time": [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0],
  "delta_time": 0.25,
  "dt_time": 0.01,
  "horizon_time": 5.0,
  "trials": )" << trials
     << R"(,
  "seed": 2026,
  "thresholds": {"shrink_len": 0.2})" << extra << "\n}";
  return os.str();
}

std::string torus_config(long trials, const char* extra) {
  std::ostringstream os;
  os << R"({
  "manifold": {"kind": "flat_torus", "dim": 2},
  "field": {"name": "torus_translation", "sigma_noise": 0.25},
  "sigma": {"fixture": "torus_winding", "winding": [1, 0], "vertices": 48, "offset_coords": [0.25, 0.5]},
  "x0_coords": [0.5, 0.5],
  "k_region": {"balls": [{"center_coords": [0.5, 0.5], "radius_len": 0.75}]},
  "w_region": {"balls": [{"center_coords": [0.5, 0.5], "radius_len": 0.45}]},
  "t_grid_time": [0.0, 0.5, 1.0, 1.5, 2.0],
  "delta_time": 0.1,
  "dt_time": 0.01,
  "horizon_time": 2.0,
  "trials": )" << trials
     << R"(,
  "seed": 99,
  "thresholds": {"shrink_len": 0.3})" << extra << "\n}";
  return os.str();
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = "/tmp/flowtop_test_" + name;
  std::ofstream out(path);
  out << text;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config parses into a validated experiment") {
  const auto cfg = parse_experiment_config(contraction_config(100, ""));
  CHECK(cfg.manifold.kind() == ManifoldKind::Euclidean);
  CHECK(cfg.field->name() == "linear_contraction");
  CHECK(cfg.sigma.vertex_count() == 12);
  CHECK(cfg.trials == 100);
  CHECK(cfg.delta == doctest::Approx(0.25));
  CHECK(cfg.thresholds.shrink_len == doctest::Approx(0.2));
  CHECK(cfg.probe_times.size() == 8);  // defaulted grid up to the horizon
  CHECK(cfg.probe_times.back() == doctest::Approx(5.0));
}

TEST_CASE("config rejections name the offending field") {
  auto expect_reject = [](const std::string& text, const char* needle) {
    try {
      (void)parse_experiment_config(text);
      FAIL_CHECK("expected ConfigInvalid mentioning " << needle);
    } catch (const ConfigInvalid& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect_reject("{\"manifold\": 3", "not valid JSON");
  expect_reject(contraction_config(100, ", \"typo_key\": 1"), "typo_key");
  expect_reject(contraction_config(0, ""), "trials");

  std::string bad_kind = contraction_config(100, "");
  bad_kind.replace(bad_kind.find("euclidean"), 9, "euclidoid");
  expect_reject(bad_kind, "kind");

  std::string off_manifold = contraction_config(100, "");
  off_manifold.replace(off_manifold.find("\"x0_coords\": [0.0, 0.0]"), 23,
                       "\"x0_coords\": [0.0]");
  expect_reject(off_manifold, "x0_coords");

  std::string small_delta = contraction_config(100, "");
  small_delta.replace(small_delta.find("\"delta_time\": 0.25"), 18, "\"delta_time\": 0.05");
  expect_reject(small_delta, "delta_time");

  std::string far_probe = contraction_config(100, ", \"probe_times_time\": [9.0]");
  expect_reject(far_probe, "probe_times_time");

  std::string leaky_sigma = contraction_config(100, "");
  leaky_sigma.replace(leaky_sigma.find("\"rho_len\": 0.5"), 14, "\"rho_len\": 2.5");
  expect_reject(leaky_sigma, "sigma image");
}

TEST_CASE("frozen flow pins the measure at one") {
  auto cfg = parse_experiment_config(contraction_config(40, ""));
  cfg.field = make_zero_field(cfg.manifold);
  const auto est = estimate_invariant_measure(cfg, cfg.k_region, cfg.x0);
  REQUIRE(est.hit_fraction.size() == cfg.probe_times.size());
  for (const auto& e : est.hit_fraction) {
    CHECK(e.p_hat == 1.0);
    CHECK(e.successes == 40);
  }
  CHECK(est.mu_hat == 1.0);
  CHECK(est.stationary);
}

TEST_CASE("measure estimate recovers the stationary gaussian mass") {
  const std::string text = R"({
  "manifold": {"kind": "euclidean", "dim": 1},
  "field": {"name": "linear_contraction", "lambda_rate": 1.0, "sigma_noise": 1.0},
  "x0_coords": [0.0],
  "k_region": {"balls": [{"center_coords": [0.0], "radius_len": 2.0}]},
  "probe_times_time": [3.0, 4.0, 5.0],
  "dt_time": 0.005,
  "horizon_time": 5.0,
  "trials": 10000,
  "seed": 31415
})";
  const auto cfg = parse_experiment_config(text);
  const auto est = estimate_invariant_measure(cfg, cfg.k_region, cfg.x0);
  const double want = std::erf(2.0);  // stationary law Normal(0, 1/2)
  const double se = std::sqrt(want * (1.0 - want) / 10000.0);
  CHECK(std::abs(est.mu_hat - want) <= 3.0 * se);
  CHECK(est.stationary);
}

TEST_CASE("lemma certificate hits the grid ceiling on frozen flows") {
  // Zero failures at n trials certify failure probability (z^2/n)/(1+z^2/n),
  // so n = 128 is needed before the 0.05 level can clear its Wilson bound.
  auto cfg = parse_experiment_config(contraction_config(128, ""));
  cfg.field = make_zero_field(cfg.manifold);
  const auto rows = run_lemma1_certificate(cfg, {0.2, 0.1, 0.05});
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    REQUIRE(row.delta.has_value());
    CHECK(*row.delta == doctest::Approx(cfg.delta).epsilon(1e-12));
    CHECK(row.estimate.successes == 0);
  }
}

TEST_CASE("epsilon at one certifies the ceiling regardless of noise") {
  auto cfg = parse_experiment_config(contraction_config(64, ""));
  const auto rows = run_lemma1_certificate(cfg, {1.0});
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].delta.has_value());
  CHECK(*rows[0].delta == doctest::Approx(cfg.delta).epsilon(1e-12));
}

TEST_CASE("certificate inverts the reflection oracle") {
  const std::string text = R"({
  "manifold": {"kind": "euclidean", "dim": 1},
  "field": {"name": "linear_contraction", "lambda_rate": 0.0, "sigma_noise": 1.0},
  "x0_coords": [0.0],
  "k_region": {"balls": [{"center_coords": [0.0], "radius_len": 1e-12}]},
  "w_region": {"balls": [{"center_coords": [0.0], "radius_len": 1.0}]},
  "delta_time": 0.4,
  "dt_time": 0.002,
  "horizon_time": 0.4,
  "trials": 2500,
  "seed": 777
})";
  const auto cfg = parse_experiment_config(text);
  const auto rows = run_lemma1_certificate(cfg, {0.2, 0.1, 0.05});
  REQUIRE(rows.size() == 3);
  double prev = 1e18;
  for (const auto& row : rows) {
    REQUIRE(row.delta.has_value());
    CHECK(*row.delta > 10.0 * cfg.dt);
    CHECK(*row.delta <= prev);
    prev = *row.delta;
    CHECK(row.estimate.ci_hi <= row.epsilon + 1e-12);
  }
  // P(sup_{s<=t} |B| >= 1) = 0.05 at t ~ 0.199; Wilson certification at 2500
  // trials lands a little below it.
  CHECK(std::abs(*rows[2].delta - 0.199) <= 0.025);
}

TEST_CASE("positive pipeline clears every inequality") {
  const auto cfg = parse_experiment_config(contraction_config(200, ""));
  const auto report = run_theorem_experiment(cfg);

  CHECK(report.t_j >= 3.5);  // stationary tail of the default probes
  CHECK(report.mu_hat > 0.9);
  CHECK(report.inequality_9_holds);
  CHECK(report.inequality_10_holds);
  CHECK(report.bound_holds);
  CHECK(report.null_homotopy_rate == 1.0);
  CHECK(report.chain_success_rate >= 0.99);
  CHECK(report.p_z.p_hat <= report.p_in_k.p_hat);
  // Inclusion-exclusion coherence within interval slack.
  CHECK(report.p_z.p_hat >=
        report.p_in_k.p_hat - report.p_diam_large.p_hat - 1e-12);
  REQUIRE(report.records.size() == 200);
  long z_count = 0;
  for (const auto& rec : report.records) {
    if (rec.in_z) {
      ++z_count;
      CHECK(rec.witness_radius.has_value());
    }
    CHECK(rec.chain_ok);
  }
  CHECK(z_count == report.p_z.successes);
}

TEST_CASE("isometry pipeline reports no valid time") {
  const auto cfg = parse_experiment_config(torus_config(60, ""));
  CHECK_THROWS_AS((void)run_theorem_experiment(cfg), NoValidTime);
}

TEST_CASE("forcing a time on the isometry keeps the class visible") {
  const auto cfg = parse_experiment_config(torus_config(60, ", \"force_time\": 1.0"));
  const auto report = run_theorem_experiment(cfg);
  CHECK(report.t_j == doctest::Approx(1.0));
  CHECK(report.null_homotopy_rate == 0.0);
  CHECK(report.p_z.successes == 0);
  CHECK(!report.inequality_9_holds);  // diameter never shrinks below R/2
  CHECK(!report.bound_holds);
  CHECK(report.chain_success_rate >= 0.95);
}

TEST_CASE("reports serialize with stable fields") {
  const auto cfg = parse_experiment_config(contraction_config(80, ""));
  const auto report = run_theorem_experiment(cfg);

  std::ostringstream js;
  write_theorem_report_json(js, report, cfg);
  const std::string out = js.str();
  for (const char* key :
       {"t_j_time", "r_inj_k_len", "mu_hat", "p_diam_large", "p_in_k", "p_z",
        "inequality_9_holds", "inequality_10_holds", "bound_holds", "null_homotopy_rate",
        "chain_success_rate", "measure", "shrink_times_time", "config_echo"})
    CHECK(out.find(key) != std::string::npos);

  std::ostringstream cs;
  write_trials_csv(cs, report);
  std::istringstream in(cs.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "trial_index,diam,in_k,in_z,witness_radius,chain_ok");
  long rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 80);
}

TEST_CASE("cli maps config and domain failures to exit codes") {
  const std::string bad = write_temp("bad.json", "{\"manifold\": [");
  CHECK(run_cli({"theorem", "--config", bad, "--out", "/tmp/flowtop_test_out_bad"}) == 2);
  CHECK(run_cli({"theorem", "--config", "/tmp/flowtop_no_such_file.json"}) == 2);
  CHECK(run_cli({"bogus_subcommand"}) == 2);

  const std::string torus = write_temp("torus.json", torus_config(40, ""));
  CHECK(run_cli({"theorem", "--config", torus, "--out", "/tmp/flowtop_test_out_nvt"}) == 3);
}

TEST_CASE("cli simulate, moment, and lemma1 write their artifacts") {
  const std::string cfgpath = write_temp("lin.json", contraction_config(40, ""));

  CHECK(run_cli({"simulate", "--config", cfgpath, "--out", "/tmp/flowtop_test_sim",
                 "--trials", "3"}) == 0);
  const std::string traj = slurp("/tmp/flowtop_test_sim/trajectories.csv");
  CHECK(traj.rfind("trial,step,t,", 0) == 0);

  CHECK(run_cli({"moment", "--config", cfgpath, "--out", "/tmp/flowtop_test_mom",
                 "--trials", "24"}) == 0);
  CHECK(slurp("/tmp/flowtop_test_mom/report.json").find("truncated_integral") !=
        std::string::npos);
  CHECK(slurp("/tmp/flowtop_test_mom/integrand.csv").rfind("t,integrand", 0) == 0);

  CHECK(run_cli({"lemma1", "--config", cfgpath, "--out", "/tmp/flowtop_test_lem",
                 "--trials", "64", "--eps", "0.5,0.25"}) == 0);
  CHECK(slurp("/tmp/flowtop_test_lem/certificate.csv").rfind("epsilon,delta,", 0) == 0);
  CHECK(slurp("/tmp/flowtop_test_lem/report.json").find("certificate") != std::string::npos);
}

TEST_CASE("theorem reports are byte-identical across worker counts") {
  const std::string cfgpath = write_temp("det.json", contraction_config(96, ""));

  setenv("FLOWTOP_THREADS", "1", 1);
  CHECK(run_cli({"theorem", "--config", cfgpath, "--out", "/tmp/flowtop_test_det1"}) == 0);
  setenv("FLOWTOP_THREADS", "3", 1);
  CHECK(run_cli({"theorem", "--config", cfgpath, "--out", "/tmp/flowtop_test_det3"}) == 0);
  unsetenv("FLOWTOP_THREADS");

  CHECK(slurp("/tmp/flowtop_test_det1/report.json") ==
        slurp("/tmp/flowtop_test_det3/report.json"));
  CHECK(slurp("/tmp/flowtop_test_det1/trials.csv") == slurp("/tmp/flowtop_test_det3/trials.csv"));
}
