#pragma once

#include "flowtop/homotopy.hpp"
#include "flowtop/moment.hpp"
#include "flowtop/region.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace flowtop {

struct Thresholds {
  double shrink_len = 0.0;         // expected-diameter level a shrinking time must clear
  double bound_slack = 0.01;       // tolerance in the final probability bound
  double stationary_widths = 2.0;  // spread allowance of tail hit fractions, in CI widths
};

// Everything one experiment needs, parsed from a JSON config file. Numeric
// keys carry their unit in the name (dt_time, radius_len, lambda_rate);
// unknown keys are rejected so typos fail loudly instead of silently
// defaulting.
struct ExperimentConfig {
  Manifold manifold;
  FieldPtr field;
  SphereMap sigma;
  Region k_region;
  Region w_region;
  Point x0;
  std::vector<double> t_grid;
  std::vector<double> probe_times;
  double delta = 0.0;
  double dt = 0.0;
  double horizon = 0.0;
  long trials = 0;
  uint64_t seed = 0;
  int s_steps = 8;
  std::optional<double> force_time;  // debug override of the selected time
  Thresholds thresholds;
  std::string out_dir;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct MeasureEstimate {
  std::vector<double> t_probe;
  std::vector<ProbabilityEstimate> hit_fraction;
  double mu_hat = 0.0;      // tail average over the last quarter of probes
  bool stationary = false;  // tail fractions vary by less than the width allowance
};

// Hit fractions P(flow(x, t) in K) per probe time, one shared pass per trial.
MeasureEstimate estimate_invariant_measure(const ExperimentConfig& cfg, const Region& k,
                                           const Point& x);

// The smallest shrinking time inside the stationary tail of the measure
// estimate; empty when the requirements have no intersection.
std::optional<double> select_time(const ExperimentConfig& cfg, const MeasureEstimate& measure,
                                  const std::vector<double>& shrink_times);

struct TrialRecord {
  long trial = 0;
  double diam = 0.0;
  bool in_k = false;
  bool in_z = false;
  std::optional<double> witness_radius;
  bool chain_ok = false;
};

struct TheoremReport {
  double t_j = 0.0;
  double r_inj_k = 0.0;
  double mu_hat = 0.0;
  ProbabilityEstimate p_diam_large;  // P(diam >= r_inj_k / 2)
  ProbabilityEstimate p_in_k;
  ProbabilityEstimate p_z;
  bool inequality_9_holds = false;  // upper CI of p_diam_large below mu/4
  bool inequality_10_holds = false; // lower CI of p_in_k above mu/2
  bool bound_holds = false;         // lower CI of p_z above mu/4 - slack
  double null_homotopy_rate = 0.0;  // witnesses found among Z-trials
  double chain_success_rate = 0.0;
  MeasureEstimate measure;
  std::vector<double> shrink_times;
  std::vector<TrialRecord> records;
};

// Full pipeline: measure estimate, shrinking times, time selection, then a
// fresh ensemble for the probability inequalities and the homotopy
// statistics. Throws NoValidTime when no time qualifies and none is forced.
TheoremReport run_theorem_experiment(const ExperimentConfig& cfg);

struct CertificateRow {
  double epsilon = 0.0;
  std::optional<double> delta;  // largest certified window, if any
  ProbabilityEstimate estimate; // exit estimate at that window
};

// For each epsilon, the largest grid window delta with the Wilson upper
// bound of P(min exit time <= delta) at or below epsilon. One shared
// exit-time ensemble keeps the table monotone by construction.
std::vector<CertificateRow> run_lemma1_certificate(const ExperimentConfig& cfg,
                                                   const std::vector<double>& eps_grid);

void write_theorem_report_json(std::ostream& os, const TheoremReport& report,
                               const ExperimentConfig& cfg);
void write_trials_csv(std::ostream& os, const TheoremReport& report);
void write_moment_report_json(std::ostream& os, const MomentIntegralReport& report);
void write_certificate_json(std::ostream& os, const std::vector<CertificateRow>& rows);

}  // namespace flowtop
