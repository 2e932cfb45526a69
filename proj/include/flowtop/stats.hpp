#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace flowtop {

struct ProbabilityEstimate {
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
  long trials = 0;
  long successes = 0;
};

// Wilson score interval; z = 1.96 gives the 95% level used throughout.
inline ProbabilityEstimate wilson_interval(long successes, long trials, double z = 1.96) {
  ProbabilityEstimate e;
  e.trials = trials;
  e.successes = successes;
  if (trials <= 0) return e;
  const double n = double(trials);
  const double p = double(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  e.p_hat = p;
  e.ci_lo = std::max(0.0, centre - half);
  e.ci_hi = std::min(1.0, centre + half);
  return e;
}

// Welford accumulator with a deterministic merge, so blocked parallel
// reductions reproduce the sequential result bit for bit when merged in
// block order.
struct MeanAccumulator {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / double(n);
    m2 += d * (x - mean);
  }

  void merge(const MeanAccumulator& o) {
    if (o.n == 0) return;
    if (n == 0) { *this = o; return; }
    const double d = o.mean - mean;
    const long total = n + o.n;
    mean += d * double(o.n) / double(total);
    m2 += o.m2 + d * d * double(n) * double(o.n) / double(total);
    n = total;
  }

  double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
  double stderr_of_mean() const { return n > 1 ? std::sqrt(variance() / double(n)) : 0.0; }
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return f;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
  const double mx = sx / double(n), my = sy / double(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

// Standard normal tail Q(x) = P(Z > x) via erfc, accurate far into the tail.
inline double normal_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// P(sup_{s<=t} |B_s| >= a) for standard Brownian motion from 0, by the
// alternating reflection series; terms decay like a Gaussian tail so a few
// suffice at any practical t.
inline double two_sided_exit_probability(double a, double t) {
  if (t <= 0.0) return 0.0;
  const double s = std::sqrt(t);
  double sum = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double term = normal_tail((2.0 * k + 1.0) * a / s);
    if (term < 1e-18) break;
    sum += (k % 2 == 0) ? term : -term;
  }
  return std::min(1.0, 4.0 * sum);
}

}  // namespace flowtop
