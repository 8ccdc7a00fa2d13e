#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace mgbench {

struct DecayPoint {
  int m = 0;
  double f_hat = 0.0;
};

// Least-squares estimate of f(m) = A lambda^m for one subspace index.
struct DecayEstimate {
  int k = -1;  // filled by the caller when the subspace index is known
  double amplitude = 0.0;
  double lambda = 0.0;
  double lambda_low = 0.0;
  double lambda_high = 0.0;
  bool has_interval = false;
  std::vector<double> residuals;  // f_hat - fit, aligned with the input points
  double r_squared = 0.0;
  int iterations = 0;
  bool clamped = false;  // raw lambda left [-1, 1] and was clamped
};

// Per-sequence estimates grouped by m, resampled for the bootstrap interval.
using SequenceTable = std::map<int, std::vector<double>>;

// Nonlinear least squares on (A, lambda), initialized from a log-linear
// regression on |f_hat| with the sign pattern resolved by trial.  Needs at
// least 3 distinct m values; throws FitError when the iteration cap is hit.
// The 95% interval is the percentile bootstrap over sequences; it is omitted
// when per_sequence is null, m values are missing from the table, or fewer
// than 10 resamples converge.
DecayEstimate fit_decay(const std::vector<DecayPoint>& points,
                        int bootstrap_resamples = 0,
                        const SequenceTable* per_sequence = nullptr,
                        std::uint64_t seed = 0);

struct FidelityReport {
  int n = 0;
  std::vector<DecayEstimate> estimates;  // ordered k = 0..2n
  double f_avg = 0.0;
  double f_avg_low = 0.0;
  double f_avg_high = 0.0;
  bool has_interval = false;
  int two_qubit_gates = 0;
  double f_gate = 0.0;  // NaN when two_qubit_gates == 0
};

// Average gate fidelity from a complete decay-rate table:
// F_avg = (2^{-n} sum_k C(2n, k) lambda_k + 1) / (2^n + 1), with the interval
// propagated from the per-k intervals (monotone in each lambda_k).  The
// per-gate heuristic is F_avg^{1/two_qubit_gates}; a nonpositive count
// defaults to the 2n(n-1) two-qubit gates of an average compiled circuit in
// nearest-neighbour form.
FidelityReport extract_fidelity(const std::vector<DecayEstimate>& estimates,
                                int n, int two_qubit_gates = -1);

}  // namespace mgbench
