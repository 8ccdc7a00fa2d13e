#include "mgbench/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mgbench/errors.hpp"
#include "mgbench/exact.hpp"
#include "mgbench/rng.hpp"

namespace mgbench {

namespace {

constexpr int kIterationCap = 200;
constexpr int kMinResamples = 10;

struct FitResult {
  double amplitude = 0.0;
  double lambda = 0.0;
  int iterations = 0;
  bool clamped = false;
};

double model(double a, double lambda, int m) {
  return a * std::pow(lambda, m);
}

double sum_squared_error(const std::vector<DecayPoint>& points, double a,
                         double lambda) {
  double sse = 0.0;
  for (const DecayPoint& p : points) {
    const double r = p.f_hat - model(a, lambda, p.m);
    sse += r * r;
  }
  return sse;
}

// Least-squares A for fixed lambda.
double best_amplitude(const std::vector<DecayPoint>& points, double lambda) {
  double num = 0.0;
  double den = 0.0;
  for (const DecayPoint& p : points) {
    const double basis = std::pow(lambda, p.m);
    num += p.f_hat * basis;
    den += basis * basis;
  }
  return den > 0.0 ? num / den : 0.0;
}

// Log-linear regression on |f_hat|, signs resolved by trying the four
// combinations and keeping the best.  Points far below the curve's scale
// are excluded from the regression; their logs carry no rate information.
void initial_guess(const std::vector<DecayPoint>& points, double& a,
                   double& lambda) {
  double max_mag = 0.0;
  for (const DecayPoint& p : points) {
    max_mag = std::max(max_mag, std::abs(p.f_hat));
  }
  const double floor = max_mag * 1e-8;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long used = 0;
  for (const DecayPoint& p : points) {
    const double mag = std::abs(p.f_hat);
    if (mag <= floor || mag < 1e-300) continue;
    const double x = static_cast<double>(p.m);
    const double y = std::log(mag);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  double mag_lambda = 0.9;
  double mag_a = 1.0;
  if (used >= 2) {
    const double det = used * sxx - sx * sx;
    if (det > 0.0) {
      const double slope = (used * sxy - sx * sy) / det;
      const double intercept = (sy - slope * sx) / used;
      mag_lambda = std::min(std::exp(slope), 2.0);
      mag_a = std::min(std::exp(intercept), 1e6);
    }
  }
  a = mag_a;
  lambda = mag_lambda;
  double best = std::numeric_limits<double>::infinity();
  for (double sa : {1.0, -1.0}) {
    for (double sl : {1.0, -1.0}) {
      const double sse = sum_squared_error(points, sa * mag_a, sl * mag_lambda);
      if (sse < best) {
        best = sse;
        a = sa * mag_a;
        lambda = sl * mag_lambda;
      }
    }
  }
}

FitResult refine(const std::vector<DecayPoint>& points, double a,
                 double lambda) {
  double sse = sum_squared_error(points, a, lambda);
  double damping = 1e-3;
  int iterations = 0;
  bool converged = false;
  while (iterations < kIterationCap) {
    ++iterations;
    double jaa = 0.0, jal = 0.0, jll = 0.0, ga = 0.0, gl = 0.0;
    for (const DecayPoint& p : points) {
      const double basis = std::pow(lambda, p.m);
      const double da = basis;
      const double dl = a * p.m * std::pow(lambda, p.m - 1);
      const double r = p.f_hat - a * basis;
      jaa += da * da;
      jal += da * dl;
      jll += dl * dl;
      ga += da * r;
      gl += dl * r;
    }
    bool stepped = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      const double haa = jaa + damping * (1.0 + jaa);
      const double hll = jll + damping * (1.0 + jll);
      const double det = haa * hll - jal * jal;
      if (std::abs(det) < 1e-300) {
        damping *= 10.0;
        continue;
      }
      const double step_a = (hll * ga - jal * gl) / det;
      const double step_l = (haa * gl - jal * ga) / det;
      const double next_sse =
          sum_squared_error(points, a + step_a, lambda + step_l);
      if (next_sse <= sse) {
        const double scale =
            std::abs(step_a) + std::abs(step_l);
        a += step_a;
        lambda += step_l;
        const double improvement = sse - next_sse;
        sse = next_sse;
        damping = std::max(damping * 0.3, 1e-12);
        stepped = true;
        if (scale < 1e-13 * (1.0 + std::abs(a) + std::abs(lambda)) ||
            improvement < 1e-28 * (1.0 + sse)) {
          converged = true;
        }
        break;
      }
      damping *= 10.0;
    }
    if (!stepped) {
      converged = true;  // no descent direction left at the damping cap
    }
    if (converged) break;
  }
  if (!converged) {
    throw FitError("decay fit did not converge in " +
                   std::to_string(kIterationCap) + " iterations (A = " +
                   std::to_string(a) + ", lambda = " + std::to_string(lambda) +
                   ", sse = " + std::to_string(sse) + ")");
  }
  FitResult result;
  result.iterations = iterations;
  if (lambda > 1.0 || lambda < -1.0) {
    result.clamped = true;
    lambda = std::clamp(lambda, -1.0, 1.0);
    a = best_amplitude(points, lambda);
  }
  result.amplitude = a;
  result.lambda = lambda;
  return result;
}

// Damped Gauss-Newton from the log-linear seed plus fixed-rate fallback
// starts; the lowest-error fit wins.
FitResult solve(const std::vector<DecayPoint>& points) {
  double a, lambda;
  initial_guess(points, a, lambda);
  FitResult best;
  double best_sse = std::numeric_limits<double>::infinity();
  bool any = false;
  std::string last_error = "no starts attempted";
  const double starts[][2] = {
      {a, lambda}, {best_amplitude(points, 0.95), 0.95},
      {best_amplitude(points, 0.6), 0.6}};
  for (const auto& start : starts) {
    try {
      const FitResult fit = refine(points, start[0], start[1]);
      const double sse = sum_squared_error(points, fit.amplitude, fit.lambda);
      if (!any || sse < best_sse) {
        best = fit;
        best_sse = sse;
        any = true;
      }
    } catch (const FitError& e) {
      last_error = e.what();
    }
  }
  if (!any) throw FitError(last_error);
  return best;
}

void check_points(const std::vector<DecayPoint>& points) {
  std::vector<int> ms;
  for (const DecayPoint& p : points) {
    if (p.m < 1) throw ConfigError("decay points need m >= 1");
    if (!std::isfinite(p.f_hat)) {
      throw ConfigError("decay points must be finite");
    }
    ms.push_back(p.m);
  }
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  if (ms.size() < 3) {
    throw ConfigError("decay fit needs at least 3 distinct sequence lengths");
  }
}

double percentile(std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto idx = static_cast<std::size_t>(pos);
  if (idx + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(idx);
  return sorted[idx] * (1.0 - frac) + sorted[idx + 1] * frac;
}

}  // namespace

DecayEstimate fit_decay(const std::vector<DecayPoint>& points,
                        int bootstrap_resamples,
                        const SequenceTable* per_sequence,
                        std::uint64_t seed) {
  check_points(points);
  const FitResult main_fit = solve(points);

  DecayEstimate estimate;
  estimate.amplitude = main_fit.amplitude;
  estimate.lambda = main_fit.lambda;
  estimate.iterations = main_fit.iterations;
  estimate.clamped = main_fit.clamped;

  double ss_res = 0.0;
  double mean = 0.0;
  for (const DecayPoint& p : points) mean += p.f_hat;
  mean /= static_cast<double>(points.size());
  double ss_tot = 0.0;
  for (const DecayPoint& p : points) {
    const double r = p.f_hat - model(main_fit.amplitude, main_fit.lambda, p.m);
    estimate.residuals.push_back(r);
    ss_res += r * r;
    ss_tot += (p.f_hat - mean) * (p.f_hat - mean);
  }
  estimate.r_squared =
      ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);

  bool table_complete = per_sequence != nullptr;
  if (table_complete) {
    for (const DecayPoint& p : points) {
      const auto it = per_sequence->find(p.m);
      if (it == per_sequence->end() || it->second.empty()) {
        table_complete = false;
        break;
      }
    }
  }
  if (bootstrap_resamples > 0 && table_complete) {
    std::vector<double> lambdas;
    lambdas.reserve(static_cast<std::size_t>(bootstrap_resamples));
    for (int r = 0; r < bootstrap_resamples; ++r) {
      Rng rng(derive_seed(seed, 0xb007u, static_cast<std::uint64_t>(r)));
      std::vector<DecayPoint> resampled;
      resampled.reserve(points.size());
      for (const DecayPoint& p : points) {
        const std::vector<double>& values = per_sequence->at(p.m);
        double total = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
          total += values[rng.below(values.size())];
        }
        resampled.push_back(
            DecayPoint{p.m, total / static_cast<double>(values.size())});
      }
      try {
        lambdas.push_back(solve(resampled).lambda);
      } catch (const FitError&) {
        // skipped resamples shrink the sample; the minimum below guards it
      }
    }
    if (static_cast<int>(lambdas.size()) >= kMinResamples) {
      std::sort(lambdas.begin(), lambdas.end());
      estimate.lambda_low = percentile(lambdas, 0.025);
      estimate.lambda_high = percentile(lambdas, 0.975);
      estimate.has_interval = true;
    }
  }
  return estimate;
}

FidelityReport extract_fidelity(const std::vector<DecayEstimate>& estimates,
                                int n, int two_qubit_gates) {
  if (n < 1) throw ConfigError("fidelity extraction needs n >= 1");
  const int count = 2 * n + 1;
  std::vector<const DecayEstimate*> by_k(count, nullptr);
  for (const DecayEstimate& e : estimates) {
    if (e.k < 0 || e.k >= count) {
      throw ConfigError("estimate carries k = " + std::to_string(e.k) +
                        " outside [0, " + std::to_string(2 * n) + "]");
    }
    if (by_k[e.k] != nullptr) {
      throw ConfigError("duplicate estimate for k = " + std::to_string(e.k));
    }
    by_k[e.k] = &e;
  }
  for (int k = 0; k < count; ++k) {
    if (by_k[k] == nullptr) {
      throw ConfigError("missing decay estimate for k = " + std::to_string(k));
    }
  }

  FidelityReport report;
  report.n = n;
  report.has_interval = true;
  const double dim = std::pow(2.0, n);
  double mid = 0.0, low = 0.0, high = 0.0;
  for (int k = 0; k < count; ++k) {
    const DecayEstimate& e = *by_k[k];
    report.estimates.push_back(e);
    const double weight = static_cast<double>(binomial(2 * n, k));
    mid += weight * e.lambda;
    low += weight * e.lambda_low;
    high += weight * e.lambda_high;
    report.has_interval = report.has_interval && e.has_interval;
  }
  const auto to_fidelity = [&](double weighted_sum) {
    return (weighted_sum / dim + 1.0) / (dim + 1.0);
  };
  report.f_avg = to_fidelity(mid);
  if (report.has_interval) {
    report.f_avg_low = to_fidelity(low);
    report.f_avg_high = to_fidelity(high);
  }

  report.two_qubit_gates =
      two_qubit_gates > 0 ? two_qubit_gates : 2 * n * (n - 1);
  report.f_gate =
      report.two_qubit_gates > 0
          ? std::pow(report.f_avg, 1.0 / report.two_qubit_gates)
          : std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace mgbench
