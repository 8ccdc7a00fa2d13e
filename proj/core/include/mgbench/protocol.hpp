#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mgbench/compiler.hpp"
#include "mgbench/majorana.hpp"
#include "mgbench/noise.hpp"
#include "mgbench/skew.hpp"

namespace mgbench {

// How outcome statistics are produced: finite shot sampling, exact per-
// sequence outcome probabilities (no shot noise, still K sampled sequences),
// or the exact sequence-averaged curve (no sampling at all).
enum class ProtocolMode { Shots, SequenceExact, Analytic };

enum class BackendChoice { Auto, Dense, Covariance };

struct RoundPlan {
  int n = 0;
  std::vector<int> k_list;
  std::vector<int> m_list;
  int sequences = 1;  // K: random sequences per (k, m) setting
  long shots = 1;     // L: measurement repetitions per sequence
  std::uint64_t seed = 0;
  ProtocolMode mode = ProtocolMode::Shots;
  // Diagnostic override forcing one SPAM basis for every k, regardless of
  // parity; zero-visibility checks rely on the mismatch it creates.
  std::optional<SpamBasis> spam_override;
};

void validate_plan(const RoundPlan& plan);

// Outcome record of one sampled sequence at one (k, m) setting.  In exact
// mode, frequencies hold outcome probabilities and shots is 1.
struct ShotBatch {
  int k = 0;
  int m = 0;
  int sequence_index = 0;
  OrthogonalElement composite;  // Q_m ... Q_1
  std::vector<std::uint64_t> factor_seeds;
  SpamBasis spam_basis = SpamBasis::Z;
  std::map<std::string, double> frequencies;
  double shots = 1.0;
  bool exact = false;
};

// Runs the sampling protocol: for every (k, m, i) draws m Haar factors from
// seeds derived from (seed, k, m, i), executes the compiled circuits under
// the noise model, and records outcome frequencies.  Backend Auto sends
// Z-basis rounds with rotation-compatible noise to the covariance backend
// and everything else to the dense backend.  Analytic mode has no batches;
// use analytic_curve instead.
std::vector<ShotBatch> run_protocol(const RoundPlan& plan,
                                    const NoiseModel& noise,
                                    BackendChoice backend = BackendChoice::Auto);

// Correlation-weighted signal of one batch,
// sum_x alpha_k(x, Q) frequencies[x] / shots.
double sequence_value(const ShotBatch& batch);

// f_hat_k(m): mean of sequence_value over the matching batches.  Throws
// ConfigError when no batch matches.
double aggregate(const std::vector<ShotBatch>& batches, int k, int m);

// Exact sequence-averaged decay curve per k in the plan, evaluated at the
// plan's m_list.  Optional channels corrupt the prepared state and the
// measurement effects, which changes amplitudes but not rates.  Supports
// noiseless, per-element dense-channel, and mixture noise.
struct AnalyticCurve {
  int k = 0;
  double lambda = 1.0;
  double amplitude = 1.0;  // value at m = 1; values[i] = amplitude * lambda^(m_i - 1)
  std::vector<double> values;
};

std::vector<AnalyticCurve> analytic_curve(
    const RoundPlan& plan, const NoiseModel& noise,
    const DenseChannel* prep_corruption = nullptr,
    const DenseChannel* meas_corruption = nullptr);

// Haar moments of |<0|U(R)|0>|^{2t} (vacuum) and of the overlap with
// (<0| + <e|)/sqrt(2), e the fully occupied state (plus).  Closed forms hold
// for even t only; odd t throws ConfigError.
struct MomentPair {
  double vacuum = 0.0;
  double plus = 0.0;
};

MomentPair moment_closed_form(int n, int t);

// Empirical K * Var(f_hat_k(m)) over independent protocol repetitions with
// no noise, one row per (k, m) in the plan.
struct VarianceRow {
  int n = 0;
  int k = 0;
  int m = 0;
  double k_times_variance = 0.0;
};

std::vector<VarianceRow> variance_probe(const RoundPlan& plan,
                                        int repetitions);

}  // namespace mgbench
