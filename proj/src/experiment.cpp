#include "flowtop/experiment.hpp"

#include "flowtop/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace flowtop {

namespace {

using Json = nlohmann::json;

// Seed streams of the pipeline phases, so no two phases share noise.
enum SeedStream : uint64_t {
  kStreamMeasure = 1,
  kStreamShrink = 2,
  kStreamEnsemble = 3,
  kStreamExit = 4,
};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigInvalid(where + ": " + what);
}

const Json& require_key(const Json& obj, const std::string& where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

void reject_unknown(const Json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known) fail(where, "unknown key '" + key + "'");
  }
}

double as_number(const Json& v, const std::string& where, const char* key) {
  if (!v.is_number()) fail(where, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double number_at(const Json& obj, const std::string& where, const char* key) {
  return as_number(require_key(obj, where, key), where, key);
}

double number_or(const Json& obj, const std::string& where, const char* key, double fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, where, key);
}

long integer_at(const Json& obj, const std::string& where, const char* key) {
  const Json& v = require_key(obj, where, key);
  if (!v.is_number_integer()) fail(where, std::string("'") + key + "' must be an integer");
  return v.get<long>();
}

std::string string_at(const Json& obj, const std::string& where, const char* key) {
  const Json& v = require_key(obj, where, key);
  if (!v.is_string()) fail(where, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

Vec parse_vec(const Json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty() || arr.size() > std::size_t(kMaxAmbientDim))
    fail(where, "must be a coordinate array of dimension 1.." +
                    std::to_string(kMaxAmbientDim));
  Vec v(int(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) fail(where, "coordinates must be numbers");
    v[int(i)] = arr[i].get<double>();
  }
  return v;
}

Point parse_point(const Json& arr, const std::string& where, const Manifold& m) {
  Point p{parse_vec(arr, where)};
  if (p.coords.size() != m.ambient_dim())
    fail(where, "needs " + std::to_string(m.ambient_dim()) + " coordinates for " + m.name());
  if (m.constraint_residual(p) > tol::kConstraint)
    fail(where, "is not a point of " + m.name());
  return p;
}

std::vector<double> parse_time_grid(const Json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty()) fail(where, "must be a non-empty array of times");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) fail(where, "times must be numbers");
    out.push_back(v.get<double>());
  }
  for (std::size_t j = 1; j < out.size(); ++j)
    if (out[j] <= out[j - 1]) fail(where, "times must be strictly increasing");
  return out;
}

Manifold parse_manifold(const Json& obj) {
  const std::string where = "manifold";
  if (!obj.is_object()) fail(where, "must be an object");
  reject_unknown(obj, where, {"kind", "dim", "radius_len", "lattice"});
  const std::string kind = string_at(obj, where, "kind");
  if (kind == "euclidean") return Manifold::euclidean(int(integer_at(obj, where, "dim")));
  if (kind == "sphere")
    return Manifold::sphere(int(integer_at(obj, where, "dim")),
                            number_or(obj, where, "radius_len", 1.0));
  if (kind == "flat_torus") {
    const auto it = obj.find("lattice");
    if (it == obj.end()) return Manifold::flat_torus(int(integer_at(obj, where, "dim")));
    if (!it->is_array() || it->empty()) fail(where, "'lattice' must be an array of columns");
    const int d = int(it->size());
    Mat basis(d, d);
    for (int c = 0; c < d; ++c) {
      const Vec col = parse_vec((*it)[std::size_t(c)], where + ".lattice");
      if (col.size() != d) fail(where, "lattice columns must match the dimension");
      basis.col(c) = col;
    }
    return Manifold::flat_torus(basis);
  }
  if (kind == "hyperbolic2") return Manifold::hyperbolic2();
  fail(where, "unknown kind '" + kind + "'");
}

FieldPtr parse_field(const Json& obj, const Manifold& m) {
  const std::string where = "field";
  if (!obj.is_object()) fail(where, "must be an object");
  reject_unknown(obj, where, {"name", "lambda_rate", "sigma_noise", "base_coords"});
  const std::string name = string_at(obj, where, "name");
  if (name == "linear_contraction")
    return make_linear_contraction(m, number_at(obj, where, "lambda_rate"),
                                   number_at(obj, where, "sigma_noise"));
  if (name == "geometric_multiplicative")
    return make_geometric_multiplicative(number_at(obj, where, "lambda_rate"),
                                         number_at(obj, where, "sigma_noise"));
  if (name == "torus_translation")
    return make_torus_translation(m, number_at(obj, where, "sigma_noise"));
  if (name == "sphere_gradient_frame") return make_sphere_gradient_frame(m);
  if (name == "hyperbolic_contraction")
    return make_hyperbolic_contraction(
        m, number_at(obj, where, "lambda_rate"), number_at(obj, where, "sigma_noise"),
        parse_point(require_key(obj, where, "base_coords"), where + ".base_coords", m));
  if (name == "zero") return make_zero_field(m);
  fail(where, "unknown name '" + name + "'");
}

SphereMap parse_sigma(const Json& obj, const Manifold& m) {
  const std::string where = "sigma";
  if (!obj.is_object()) fail(where, "must be an object");
  reject_unknown(obj, where,
                 {"fixture", "vertices", "rho_len", "level", "center_coords", "winding",
                  "offset_coords"});
  const std::string fixture = string_at(obj, where, "fixture");
  if (fixture == "geodesic_circle") {
    const Point center =
        parse_point(require_key(obj, where, "center_coords"), where + ".center_coords", m);
    return make_geodesic_circle_loop(m, center, number_at(obj, where, "rho_len"),
                                     int(integer_at(obj, where, "vertices")));
  }
  if (fixture == "torus_winding") {
    const Json& warr = require_key(obj, where, "winding");
    if (!warr.is_array() || warr.empty()) fail(where, "'winding' must be an integer array");
    std::vector<long> winding;
    for (const auto& v : warr) {
      if (!v.is_number_integer()) fail(where, "'winding' must be an integer array");
      winding.push_back(v.get<long>());
    }
    Point offset{Vec::Zero(m.dim())};
    const auto it = obj.find("offset_coords");
    if (it != obj.end()) offset = parse_point(*it, where + ".offset_coords", m);
    return make_torus_winding_loop(m, winding, int(integer_at(obj, where, "vertices")), offset);
  }
  if (fixture == "icosphere_ball") {
    const Point center =
        parse_point(require_key(obj, where, "center_coords"), where + ".center_coords", m);
    return make_icosphere_map(m, center, number_at(obj, where, "rho_len"),
                              int(integer_at(obj, where, "level")));
  }
  if (fixture == "icosphere_identity")
    return make_icosphere_identity(m, int(integer_at(obj, where, "level")));
  fail(where, "unknown fixture '" + fixture + "'");
}

Region parse_region(const Json& obj, const std::string& where, const Manifold& m) {
  if (!obj.is_object()) fail(where, "must be an object");
  reject_unknown(obj, where, {"balls"});
  const Json& balls = require_key(obj, where, "balls");
  if (!balls.is_array() || balls.empty()) fail(where, "'balls' must be a non-empty array");
  Region region;
  for (const auto& b : balls) {
    if (!b.is_object()) fail(where, "each ball must be an object");
    reject_unknown(b, where + ".balls[]", {"center_coords", "radius_len"});
    Ball ball;
    ball.center =
        parse_point(require_key(b, where, "center_coords"), where + ".center_coords", m);
    ball.radius = number_at(b, where + ".balls[]", "radius_len");
    if (ball.radius <= 0.0) fail(where, "ball radius must be positive");
    region.balls.push_back(std::move(ball));
  }
  return region;
}

Thresholds parse_thresholds(const Json& obj) {
  const std::string where = "thresholds";
  if (!obj.is_object()) fail(where, "must be an object");
  reject_unknown(obj, where, {"shrink_len", "bound_slack", "stationary_widths"});
  Thresholds t;
  t.shrink_len = number_or(obj, where, "shrink_len", 0.0);
  t.bound_slack = number_or(obj, where, "bound_slack", 0.01);
  t.stationary_widths = number_or(obj, where, "stationary_widths", 2.0);
  return t;
}

Json probability_json(const ProbabilityEstimate& e) {
  return Json{{"p_hat", e.p_hat},
              {"ci_lo", e.ci_lo},
              {"ci_hi", e.ci_hi},
              {"successes", e.successes},
              {"trials", e.trials}};
}

void write_double(std::ostream& os, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigInvalid("config: top level must be an object");
  reject_unknown(root, "config",
                 {"manifold", "field", "sigma", "x0_coords", "k_region", "w_region",
                  "t_grid_time", "probe_times_time", "delta_time", "dt_time", "horizon_time",
                  "trials", "seed", "s_steps", "force_time", "thresholds", "out_dir"});

  ExperimentConfig cfg;
  cfg.manifold = parse_manifold(require_key(root, "config", "manifold"));
  cfg.field = parse_field(require_key(root, "config", "field"), cfg.manifold);
  cfg.dt = number_at(root, "config", "dt_time");
  cfg.horizon = number_at(root, "config", "horizon_time");
  cfg.trials = integer_at(root, "config", "trials");
  cfg.seed = uint64_t(integer_at(root, "config", "seed"));
  cfg.x0 =
      parse_point(require_key(root, "config", "x0_coords"), "config.x0_coords", cfg.manifold);

  if (cfg.dt <= 0.0) throw ConfigInvalid("config: dt_time must be positive");
  if (cfg.horizon < cfg.dt) throw ConfigInvalid("config: horizon_time must cover a step");
  if (cfg.trials < 1) throw ConfigInvalid("config: trials must be at least 1");

  if (root.contains("sigma")) cfg.sigma = parse_sigma(root["sigma"], cfg.manifold);
  if (root.contains("k_region"))
    cfg.k_region = parse_region(root["k_region"], "k_region", cfg.manifold);
  if (root.contains("w_region"))
    cfg.w_region = parse_region(root["w_region"], "w_region", cfg.manifold);
  if (root.contains("t_grid_time"))
    cfg.t_grid = parse_time_grid(root["t_grid_time"], "config.t_grid_time");
  if (root.contains("probe_times_time"))
    cfg.probe_times = parse_time_grid(root["probe_times_time"], "config.probe_times_time");
  cfg.delta = number_or(root, "config", "delta_time", 0.0);
  if (root.contains("s_steps")) cfg.s_steps = int(integer_at(root, "config", "s_steps"));
  if (root.contains("force_time"))
    cfg.force_time = as_number(root["force_time"], "config", "force_time");
  if (root.contains("thresholds")) cfg.thresholds = parse_thresholds(root["thresholds"]);
  if (root.contains("out_dir")) cfg.out_dir = string_at(root, "config", "out_dir");

  if (cfg.s_steps < 1) throw ConfigInvalid("config: s_steps must be at least 1");
  if (cfg.delta > 0.0 && cfg.delta < 10.0 * cfg.dt * (1.0 - tol::kGridSnap))
    throw ConfigInvalid("config: delta_time must be at least ten grid steps");
  for (double t : cfg.t_grid)
    if (t < 0.0 || t > cfg.horizon * (1.0 + tol::kGridSnap))
      throw ConfigInvalid("config: t_grid_time must lie within [0, horizon_time]");
  for (double t : cfg.probe_times)
    if (t <= 0.0 || t > cfg.horizon * (1.0 + tol::kGridSnap))
      throw ConfigInvalid("config: probe_times_time must lie within (0, horizon_time]");
  if (!cfg.sigma.image.empty() && !cfg.k_region.balls.empty())
    for (const Point& p : cfg.sigma.image)
      if (!cfg.k_region.contains(cfg.manifold, p))
        throw ConfigInvalid("config: sigma image must be contained in k_region");
  if (cfg.probe_times.empty()) {
    for (int j = 1; j <= 8; ++j) cfg.probe_times.push_back(cfg.horizon * double(j) / 8.0);
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str());
}

MeasureEstimate estimate_invariant_measure(const ExperimentConfig& cfg, const Region& k,
                                           const Point& x) {
  if (k.balls.empty()) throw ConfigInvalid("measure estimate needs a region");
  if (!k.contains(cfg.manifold, x))
    throw ConfigInvalid("measure estimate starts outside the region");
  if (cfg.probe_times.empty()) throw ConfigInvalid("measure estimate needs probe times");

  const std::vector<double>& probes = cfg.probe_times;
  const double horizon = probes.back();
  const uint64_t seed = derive_seed(cfg.seed, kStreamMeasure);

  using Acc = std::vector<long>;
  auto blocks = parallel_blocks<Acc>(
      cfg.trials, 64, 0, [&](long trial, Acc& acc) {
        if (acc.empty()) acc.assign(probes.size(), 0);
        const FlowRealization r(
            cfg.field,
            sample_brownian_path(cfg.field->noise_dim(), horizon, cfg.dt, seed, trial));
        FlowCursor cursor(r, x);
        for (std::size_t j = 0; j < probes.size(); ++j) {
          cursor.advance_to_time(probes[j]);
          if (k.contains(cfg.manifold, cursor.point())) ++acc[j];
        }
      });

  std::vector<long> hits(probes.size(), 0);
  for (const Acc& acc : blocks) {
    if (acc.empty()) continue;
    for (std::size_t j = 0; j < hits.size(); ++j) hits[j] += acc[j];
  }

  MeasureEstimate est;
  est.t_probe = probes;
  for (long h : hits) est.hit_fraction.push_back(wilson_interval(h, cfg.trials));

  const std::size_t tail = std::max<std::size_t>(1, probes.size() / 4);
  const std::size_t start = probes.size() - tail;
  double sum = 0.0, width_sum = 0.0;
  double lo = 1.0, hi = 0.0;
  for (std::size_t j = start; j < probes.size(); ++j) {
    const ProbabilityEstimate& e = est.hit_fraction[j];
    sum += e.p_hat;
    width_sum += e.ci_hi - e.ci_lo;
    lo = std::min(lo, e.p_hat);
    hi = std::max(hi, e.p_hat);
  }
  est.mu_hat = sum / double(tail);
  const double mean_width = width_sum / double(tail);
  est.stationary = (hi - lo) <= cfg.thresholds.stationary_widths * mean_width;
  return est;
}

std::optional<double> select_time(const ExperimentConfig& cfg, const MeasureEstimate& measure,
                                  const std::vector<double>& shrink_times) {
  (void)cfg;
  if (!measure.stationary || shrink_times.empty()) return std::nullopt;
  const std::size_t tail = std::max<std::size_t>(1, measure.t_probe.size() / 4);
  const double tail_start = measure.t_probe[measure.t_probe.size() - tail];
  for (double s : shrink_times)
    if (s >= tail_start) return s;
  return std::nullopt;
}

TheoremReport run_theorem_experiment(const ExperimentConfig& cfg) {
  const Manifold& m = cfg.manifold;
  if (cfg.sigma.image.empty()) throw ConfigInvalid("theorem experiment needs a sigma fixture");
  if (cfg.k_region.balls.empty()) throw ConfigInvalid("theorem experiment needs k_region");
  if (cfg.t_grid.empty()) throw ConfigInvalid("theorem experiment needs t_grid_time");
  if (cfg.delta <= 0.0) throw ConfigInvalid("theorem experiment needs delta_time");
  if (cfg.thresholds.shrink_len <= 0.0)
    throw ConfigInvalid("theorem experiment needs thresholds.shrink_len");

  const PointSet k_samples = sample_region(m, cfg.k_region, 8);
  TheoremReport report;
  report.r_inj_k = m.injectivity_radius(k_samples);
  report.measure = estimate_invariant_measure(cfg, cfg.k_region, cfg.x0);
  report.mu_hat = report.measure.mu_hat;
  report.shrink_times =
      find_shrinking_times(cfg.field, cfg.sigma, cfg.t_grid, cfg.dt, cfg.trials,
                           cfg.thresholds.shrink_len, derive_seed(cfg.seed, kStreamShrink));

  std::optional<double> t_j =
      cfg.force_time ? cfg.force_time : select_time(cfg, report.measure, report.shrink_times);
  if (!t_j)
    throw NoValidTime("no grid time is both a shrinking time and in the stationary tail");
  report.t_j = *t_j;

  const uint64_t ens_seed = derive_seed(cfg.seed, kStreamEnsemble);
  const double half_r = 0.5 * report.r_inj_k;

  using Acc = std::vector<TrialRecord>;
  auto blocks = parallel_blocks<Acc>(
      cfg.trials, 16, 0, [&](long trial, Acc& acc) {
        const FlowRealization r(
            cfg.field,
            sample_brownian_path(cfg.field->noise_dim(), report.t_j, cfg.dt, ens_seed, trial));
        TrialRecord rec;
        rec.trial = trial;
        rec.chain_ok =
            stepwise_homotopy_chain(cfg.sigma, r, report.t_j, cfg.delta, cfg.s_steps).ok();
        const SphereMap pushed = push_map(cfg.sigma, r, report.t_j);
        rec.diam = m.diameter(pushed.image);
        rec.in_k = cfg.k_region.contains(m, flow_map(r, cfg.x0, report.t_j).point);
        rec.in_z = rec.diam < half_r && rec.in_k;
        if (rec.in_z) {
          const auto witness = null_homotopy_witness(pushed, k_samples);
          if (witness) rec.witness_radius = witness->radius;
        }
        acc.push_back(rec);
      });

  long n_diam_large = 0, n_in_k = 0, n_z = 0, n_witness = 0, n_chain = 0;
  for (const Acc& acc : blocks)
    for (const TrialRecord& rec : acc) {
      report.records.push_back(rec);
      if (rec.diam >= half_r) ++n_diam_large;
      if (rec.in_k) ++n_in_k;
      if (rec.in_z) ++n_z;
      if (rec.witness_radius) ++n_witness;
      if (rec.chain_ok) ++n_chain;
    }

  report.p_diam_large = wilson_interval(n_diam_large, cfg.trials);
  report.p_in_k = wilson_interval(n_in_k, cfg.trials);
  report.p_z = wilson_interval(n_z, cfg.trials);
  report.inequality_9_holds = report.p_diam_large.ci_hi < report.mu_hat / 4.0;
  report.inequality_10_holds = report.p_in_k.ci_lo > report.mu_hat / 2.0;
  report.bound_holds =
      report.p_z.ci_lo > report.mu_hat / 4.0 - cfg.thresholds.bound_slack;
  report.null_homotopy_rate = n_z > 0 ? double(n_witness) / double(n_z) : 0.0;
  report.chain_success_rate = double(n_chain) / double(cfg.trials);
  return report;
}

std::vector<CertificateRow> run_lemma1_certificate(const ExperimentConfig& cfg,
                                                   const std::vector<double>& eps_grid) {
  const Manifold& m = cfg.manifold;
  if (cfg.k_region.balls.empty() || cfg.w_region.balls.empty())
    throw ConfigInvalid("certificate needs k_region and w_region");
  if (eps_grid.empty()) throw ConfigInvalid("certificate needs an epsilon grid");

  const PointSet k_samples = sample_region(m, cfg.k_region, 8);
  for (const Point& p : k_samples)
    if (!cfg.w_region.contains(m, p))
      throw ConfigInvalid("certificate needs k_region inside w_region");

  const double delta_max = cfg.delta > 0.0 ? cfg.delta : cfg.horizon;
  const auto taus = min_exit_times(cfg.field, k_samples, cfg.w_region, delta_max, cfg.dt,
                                   cfg.trials, derive_seed(cfg.seed, kStreamExit));

  std::vector<double> exited;
  for (const auto& tau : taus)
    if (tau) exited.push_back(*tau);
  std::sort(exited.begin(), exited.end());

  const long k_lo = 10;
  const long k_max = long(std::floor(delta_max / cfg.dt + tol::kGridSnap));
  const auto exits_by = [&](long k) {
    const double window = double(k) * cfg.dt * (1.0 + tol::kGridSnap);
    return long(std::upper_bound(exited.begin(), exited.end(), window) - exited.begin());
  };

  std::vector<CertificateRow> rows;
  for (double eps : eps_grid) {
    CertificateRow row;
    row.epsilon = eps;
    const auto certified = [&](long k) {
      return wilson_interval(exits_by(k), cfg.trials).ci_hi <= eps;
    };
    if (k_max >= k_lo && certified(k_lo)) {
      long lo = k_lo, hi = k_max;
      if (certified(k_max)) {
        lo = k_max;
      } else {
        // Exit counts are monotone in the window, so plain bisection finds
        // the last certified grid step.
        while (hi - lo > 1) {
          const long mid = lo + (hi - lo) / 2;
          if (certified(mid)) lo = mid;
          else hi = mid;
        }
      }
      row.delta = double(lo) * cfg.dt;
      row.estimate = wilson_interval(exits_by(lo), cfg.trials);
    } else {
      row.estimate = wilson_interval(exits_by(std::min(k_lo, k_max)), cfg.trials);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_theorem_report_json(std::ostream& os, const TheoremReport& report,
                               const ExperimentConfig& cfg) {
  Json measure{{"t_probe_time", report.measure.t_probe},
               {"mu_hat", report.measure.mu_hat},
               {"stationary", report.measure.stationary}};
  Json fractions = Json::array();
  for (const auto& e : report.measure.hit_fraction) fractions.push_back(probability_json(e));
  measure["hit_fraction"] = fractions;

  long n_z = 0, n_witness = 0;
  for (const auto& rec : report.records) {
    if (rec.in_z) ++n_z;
    if (rec.witness_radius) ++n_witness;
  }

  const Json j{{"t_j_time", report.t_j},
               {"r_inj_k_len", report.r_inj_k},
               {"mu_hat", report.mu_hat},
               {"p_diam_large", probability_json(report.p_diam_large)},
               {"p_in_k", probability_json(report.p_in_k)},
               {"p_z", probability_json(report.p_z)},
               {"inequality_9_holds", report.inequality_9_holds},
               {"inequality_10_holds", report.inequality_10_holds},
               {"bound_holds", report.bound_holds},
               {"null_homotopy_rate", report.null_homotopy_rate},
               {"chain_success_rate", report.chain_success_rate},
               {"z_trials", n_z},
               {"witnesses_found", n_witness},
               {"shrink_times_time", report.shrink_times},
               {"measure", measure},
               {"config_echo",
                Json{{"seed", cfg.seed},
                     {"trials", cfg.trials},
                     {"dt_time", cfg.dt},
                     {"delta_time", cfg.delta},
                     {"horizon_time", cfg.horizon},
                     {"s_steps", cfg.s_steps}}}};
  os << j.dump(2) << "\n";
}

void write_trials_csv(std::ostream& os, const TheoremReport& report) {
  os << "trial_index,diam,in_k,in_z,witness_radius,chain_ok\n";
  for (const TrialRecord& rec : report.records) {
    os << rec.trial << ',';
    write_double(os, rec.diam);
    os << ',' << (rec.in_k ? 1 : 0) << ',' << (rec.in_z ? 1 : 0) << ',';
    if (rec.witness_radius) write_double(os, *rec.witness_radius);
    os << ',' << (rec.chain_ok ? 1 : 0) << "\n";
  }
}

void write_moment_report_json(std::ostream& os, const MomentIntegralReport& report) {
  const Json j{{"t_grid_time", report.t_grid},
               {"integrand", report.integrand},
               {"stderrs", report.stderrs},
               {"truncated_integral", report.truncated_integral},
               {"tail_slope", report.tail_slope},
               {"converged", report.converged}};
  os << j.dump(2) << "\n";
}

void write_certificate_json(std::ostream& os, const std::vector<CertificateRow>& rows) {
  Json arr = Json::array();
  for (const auto& row : rows) {
    Json r{{"epsilon", row.epsilon}, {"estimate", probability_json(row.estimate)}};
    if (row.delta) r["delta_time"] = *row.delta;
    else r["delta_time"] = nullptr;
    arr.push_back(r);
  }
  os << Json{{"certificate", arr}}.dump(2) << "\n";
}

}  // namespace flowtop
