#include "mgbench/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "mgbench/correlation.hpp"
#include "mgbench/covariance_sim.hpp"
#include "mgbench/dense_sim.hpp"
#include "mgbench/errors.hpp"
#include "mgbench/exact.hpp"
#include "mgbench/rng.hpp"

namespace mgbench {

namespace {

constexpr std::uint64_t kRepetitionTag = 0x7265706561747301ULL;

SpamBasis basis_for(const RoundPlan& plan, int k) {
  if (plan.spam_override.has_value()) return *plan.spam_override;
  return k % 2 == 0 ? SpamBasis::Z : SpamBasis::X;
}

bool covariance_supports(const NoiseModel& noise, SpamBasis basis) {
  return basis == SpamBasis::Z &&
         (std::holds_alternative<NoiseNone>(noise) ||
          std::holds_alternative<GaussianB>(noise));
}

struct SequenceDraw {
  std::vector<std::uint64_t> factor_seeds;
  std::vector<OrthogonalElement> factors;
  Eigen::MatrixXd composite;
};

SequenceDraw draw_sequence(int n, std::uint64_t sequence_seed, int m) {
  SequenceDraw draw;
  draw.composite = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  for (int j = 1; j <= m; ++j) {
    const std::uint64_t factor_seed = derive_seed(sequence_seed, 1, j);
    Rng rng(factor_seed);
    OrthogonalElement q = haar_sample(n, rng);
    draw.composite = q.matrix() * draw.composite;
    draw.factor_seeds.push_back(factor_seed);
    draw.factors.push_back(std::move(q));
  }
  return draw;
}

std::map<std::string, double> counts_to_frequencies(
    const std::vector<long>& counts, int n) {
  std::map<std::string, double> freq;
  for (std::size_t idx = 0; idx < counts.size(); ++idx) {
    if (counts[idx] == 0) continue;
    freq[bits_to_string(bits_from_index(idx, n))] =
        static_cast<double>(counts[idx]);
  }
  return freq;
}

std::map<std::string, double> probabilities_to_frequencies(
    const std::vector<double>& probs, int n) {
  std::map<std::string, double> freq;
  for (std::size_t idx = 0; idx < probs.size(); ++idx) {
    const double p = std::max(probs[idx], 0.0);
    if (p == 0.0) continue;
    freq[bits_to_string(bits_from_index(idx, n))] = p;
  }
  return freq;
}

// Exact outcome distribution of one noisy sequence on the dense backend.
// Mixture noise reuses `mixture_unitaries`, the dense form of each component
// rotation, instead of recompiling them for every noise event.
std::vector<double> dense_sequence_probabilities(
    int n, const SequenceDraw& draw, const NoiseModel& noise, SpamBasis basis,
    const std::vector<Eigen::MatrixXcd>* mixture_unitaries) {
  const DenseLimits limits;
  if (std::holds_alternative<NoiseNone>(noise)) {
    if (n > limits.statevector) {
      throw BackendError("dense statevector limited to n <= " +
                         std::to_string(limits.statevector) + ", got " +
                         std::to_string(n));
    }
    Eigen::VectorXcd psi = spam_vector(n, basis);
    for (const OrthogonalElement& q : draw.factors) {
      const GateCircuit circuit = compile(q);
      for (const Gate& gate : circuit.gates) {
        apply_gate_vector(psi, n, gate);
      }
    }
    return measurement_probabilities(psi, n, basis);
  }
  if (n > limits.channels) {
    throw BackendError("dense channel evolution limited to n <= " +
                       std::to_string(limits.channels) + ", got " +
                       std::to_string(n));
  }
  Eigen::MatrixXcd rho = spam_density(n, basis);
  const auto* mix = std::get_if<GaussianB>(&noise);
  for (const OrthogonalElement& q : draw.factors) {
    if (mix != nullptr && mixture_unitaries != nullptr) {
      const GateCircuit circuit = compile(q);
      for (const Gate& gate : circuit.gates) {
        apply_gate_density(rho, n, gate);
      }
      Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
      for (std::size_t i = 0; i < mixture_unitaries->size(); ++i) {
        const Eigen::MatrixXcd& u = (*mixture_unitaries)[i];
        out.noalias() += mix->weights[i] * (u * rho * u.adjoint());
      }
      rho = std::move(out);
    } else {
      apply_circuit_density(rho, compile(q), noise);
    }
  }
  return measurement_probabilities(rho, n, basis);
}

CovarianceState covariance_sequence_state(int n, const SequenceDraw& draw,
                                          const NoiseModel& noise,
                                          std::uint64_t sequence_seed) {
  CovarianceState state = covariance_from_bits(std::vector<int>(n, 0));
  const auto* mix = std::get_if<GaussianB>(&noise);
  for (std::size_t j = 0; j < draw.factors.size(); ++j) {
    apply_rotation(state, induced_rotation(compile(draw.factors[j])).matrix());
    if (mix != nullptr) {
      Rng event_rng(derive_seed(sequence_seed, 2, static_cast<std::uint64_t>(j + 1)));
      apply_rotation(state,
                     mix->rotations[sample_mixture_component(*mix, event_rng)]);
    }
  }
  return state;
}

Eigen::MatrixXcd apply_adjoint_channel(const Eigen::MatrixXcd& effect,
                                       const DenseChannel& channel) {
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Zero(effect.rows(), effect.cols());
  for (const auto& k : channel.kraus) {
    out.noalias() += k.adjoint() * effect * k;
  }
  return out;
}

// Dense basis-state vector of outcome index idx in the given basis.
Eigen::VectorXcd effect_vector(int n, long idx, SpamBasis basis) {
  const long dim = 1L << n;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  if (basis == SpamBasis::Z) {
    v(idx) = 1.0;
    return v;
  }
  const double scale = std::pow(2.0, -0.5 * n);
  for (long y = 0; y < dim; ++y) {
    v(y) = __builtin_popcountll(static_cast<unsigned long long>(idx & y)) % 2 == 0
               ? scale
               : -scale;
  }
  return v;
}

}  // namespace

void validate_plan(const RoundPlan& plan) {
  if (plan.n < 1) throw ConfigError("plan needs n >= 1");
  if (plan.k_list.empty()) {
    throw ConfigError("k_list must be nonempty");
  }
  for (std::size_t a = 0; a < plan.k_list.size(); ++a) {
    const int k = plan.k_list[a];
    if (k < 0 || k > 2 * plan.n) {
      throw ConfigError("k = " + std::to_string(k) + " out of range [0, " +
                        std::to_string(2 * plan.n) + "]");
    }
    for (std::size_t b = a + 1; b < plan.k_list.size(); ++b) {
      if (plan.k_list[b] == k) {
        throw ConfigError("k_list entries must be distinct");
      }
    }
  }
  if (plan.m_list.empty()) {
    throw ConfigError("m_list must be nonempty");
  }
  int previous = 0;
  for (int m : plan.m_list) {
    if (m < 1) throw ConfigError("sequence lengths must be >= 1");
    if (m <= previous) {
      throw ConfigError("m_list must be strictly increasing");
    }
    previous = m;
  }
  if (plan.sequences < 1) throw ConfigError("K must be >= 1");
  if (plan.shots < 1) throw ConfigError("L must be >= 1");
}

std::vector<ShotBatch> run_protocol(const RoundPlan& plan,
                                    const NoiseModel& noise,
                                    BackendChoice backend) {
  validate_plan(plan);
  validate_noise(noise, plan.n);
  if (plan.mode == ProtocolMode::Analytic) {
    throw ConfigError(
        "analytic mode produces a curve, not batches; use analytic_curve");
  }
  std::vector<ShotBatch> batches;
  batches.reserve(plan.k_list.size() * plan.m_list.size() *
                  static_cast<std::size_t>(plan.sequences));
  std::vector<Eigen::MatrixXcd> mixture_unitaries;
  const auto* mix = std::get_if<GaussianB>(&noise);
  const auto mixture_dense = [&]() -> const std::vector<Eigen::MatrixXcd>* {
    if (mix == nullptr) return nullptr;
    if (mixture_unitaries.empty()) {
      mixture_unitaries.reserve(mix->rotations.size());
      for (const auto& r : mix->rotations) {
        mixture_unitaries.push_back(
            dense_unitary(compile(OrthogonalElement(r))));
      }
    }
    return &mixture_unitaries;
  };
  for (int k : plan.k_list) {
    const SpamBasis basis = basis_for(plan, k);
    bool use_covariance;
    switch (backend) {
      case BackendChoice::Covariance:
        if (plan.mode != ProtocolMode::Shots) {
          throw BackendError(
              "exact per-sequence probabilities run on the dense backend");
        }
        if (basis == SpamBasis::X) {
          throw BackendError(
              "covariance backend serves Z-basis SPAM only; "
              "k = " + std::to_string(k) + " needs the X basis");
        }
        if (!covariance_supports(noise, basis)) {
          throw BackendError(
              "covariance backend supports noiseless runs or rotation "
              "mixtures only");
        }
        use_covariance = true;
        break;
      case BackendChoice::Dense:
        use_covariance = false;
        break;
      case BackendChoice::Auto:
      default:
        use_covariance = plan.mode == ProtocolMode::Shots &&
                         covariance_supports(noise, basis);
        break;
    }
    for (int m : plan.m_list) {
      for (int i = 0; i < plan.sequences; ++i) {
        const std::uint64_t sequence_seed =
            derive_seed(plan.seed, static_cast<std::uint64_t>(k),
                        static_cast<std::uint64_t>(m),
                        static_cast<std::uint64_t>(i));
        SequenceDraw draw = draw_sequence(plan.n, sequence_seed, m);
        std::map<std::string, double> frequencies;
        double shots = 1.0;
        bool exact = false;
        if (plan.mode == ProtocolMode::SequenceExact) {
          frequencies = probabilities_to_frequencies(
              dense_sequence_probabilities(plan.n, draw, noise, basis,
                                           mixture_dense()),
              plan.n);
          exact = true;
        } else if (use_covariance) {
          const CovarianceState state =
              covariance_sequence_state(plan.n, draw, noise, sequence_seed);
          Rng shot_rng(derive_seed(sequence_seed, 3, 0));
          std::map<std::string, long> counts;
          for (long s = 0; s < plan.shots; ++s) {
            ++counts[bits_to_string(sample_outcome(state, shot_rng))];
          }
          for (const auto& [key, value] : counts) {
            frequencies[key] = static_cast<double>(value);
          }
          shots = static_cast<double>(plan.shots);
        } else {
          const std::vector<double> probs = dense_sequence_probabilities(
              plan.n, draw, noise, basis, mixture_dense());
          Rng shot_rng(derive_seed(sequence_seed, 3, 0));
          std::vector<long> counts(probs.size(), 0);
          for (long s = 0; s < plan.shots; ++s) {
            ++counts[sample_index(probs, shot_rng)];
          }
          frequencies = counts_to_frequencies(counts, plan.n);
          shots = static_cast<double>(plan.shots);
        }
        batches.push_back(ShotBatch{k, m, i,
                                    OrthogonalElement(draw.composite),
                                    std::move(draw.factor_seeds), basis,
                                    std::move(frequencies), shots, exact});
      }
    }
  }
  return batches;
}

double sequence_value(const ShotBatch& batch) {
  double value = 0.0;
  for (const auto& [key, count] : batch.frequencies) {
    const std::vector<int> x = bits_from_string(key);
    value += alpha(x, batch.composite, batch.k) * count;
  }
  return value / batch.shots;
}

double aggregate(const std::vector<ShotBatch>& batches, int k, int m) {
  double total = 0.0;
  long matched = 0;
  for (const ShotBatch& batch : batches) {
    if (batch.k != k || batch.m != m) continue;
    total += sequence_value(batch);
    ++matched;
  }
  if (matched == 0) {
    throw ConfigError("no batches recorded for k = " + std::to_string(k) +
                      ", m = " + std::to_string(m));
  }
  return total / static_cast<double>(matched);
}

std::vector<AnalyticCurve> analytic_curve(const RoundPlan& plan,
                                          const NoiseModel& noise,
                                          const DenseChannel* prep_corruption,
                                          const DenseChannel* meas_corruption) {
  validate_plan(plan);
  validate_noise(noise, plan.n);
  const int n = plan.n;
  if (n > 6) {
    throw BackendError("analytic curves limited to n <= 6, got " +
                       std::to_string(n));
  }
  if (std::holds_alternative<GateDependent>(noise)) {
    throw BackendError(
        "gate-dependent noise has no single subspace decay rate; "
        "fit the measured decay instead");
  }
  if (const auto* ch = std::get_if<DenseChannel>(&noise)) {
    if (ch->granularity != NoiseGranularity::PerElement) {
      throw ConfigError(
          "the analytic curve assumes one noise event per sequence element");
    }
  }
  if (prep_corruption != nullptr) {
    validate_noise(NoiseModel{*prep_corruption}, n);
  }
  if (meas_corruption != nullptr) {
    validate_noise(NoiseModel{*meas_corruption}, n);
  }

  // Dense unitaries of mixture components, shared across k.
  std::vector<Eigen::MatrixXcd> mixture_unitaries;
  const auto* mix = std::get_if<GaussianB>(&noise);
  if (mix != nullptr) {
    for (const auto& r : mix->rotations) {
      mixture_unitaries.push_back(
          dense_unitary(compile(OrthogonalElement(r))));
    }
  }
  const auto* channel = std::get_if<DenseChannel>(&noise);
  const auto apply_noise_dense = [&](const Eigen::MatrixXcd& op) {
    if (channel != nullptr) {
      Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(op.rows(), op.cols());
      for (const auto& kr : channel->kraus) {
        out.noalias() += kr * op * kr.adjoint();
      }
      return out;
    }
    if (mix != nullptr) {
      Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(op.rows(), op.cols());
      for (std::size_t i = 0; i < mixture_unitaries.size(); ++i) {
        out.noalias() += mix->weights[i] *
                         (mixture_unitaries[i] * op *
                          mixture_unitaries[i].adjoint());
      }
      return out;
    }
    return op;
  };

  const long dim = 1L << n;
  std::vector<AnalyticCurve> curves;
  curves.reserve(plan.k_list.size());
  for (int k : plan.k_list) {
    const SpamBasis basis = basis_for(plan, k);
    const double lambda = lambda_exact(noise, n, k);

    Eigen::MatrixXcd rho0 = spam_density(n, basis);
    Eigen::MatrixXcd rho0_tilde = rho0;
    if (prep_corruption != nullptr) {
      apply_channel(rho0_tilde, *prep_corruption);
    }

    std::vector<Eigen::MatrixXcd> effects;
    std::vector<Eigen::MatrixXcd> effects_tilde;
    for (long idx = 0; idx < dim; ++idx) {
      const Eigen::VectorXcd v = effect_vector(n, idx, basis);
      Eigen::MatrixXcd effect = v * v.adjoint();
      effects_tilde.push_back(
          meas_corruption != nullptr
              ? apply_adjoint_channel(effect, *meas_corruption)
              : effect);
      effects.push_back(std::move(effect));
    }

    std::complex<double> t_measure = 0.0;
    std::complex<double> t_state = 0.0;
    const double scale = std::pow(2.0, -n);
    for (std::uint32_t mask : subset_masks(2 * n, k)) {
      const Eigen::MatrixXcd gamma = pauli_dense(majorana_to_pauli(
          make_majorana_label(n, subset_from_mask(mask, 2 * n))));
      const Eigen::MatrixXcd noisy = apply_noise_dense(gamma);
      for (long idx = 0; idx < dim; ++idx) {
        t_measure += scale * (effects[idx] * gamma).trace() *
                     (effects_tilde[idx] * noisy).trace();
      }
      t_state += scale * (gamma.adjoint() * rho0).trace() *
                 (gamma.adjoint() * rho0_tilde).trace();
    }

    // Both trace sums carry one factor 2^{-n}; dividing by
    // N_k C(2n, k) = 2^{-n} (diagonal-product count)^2 leaves a net 2^n.
    const double count = static_cast<double>(
        k % 2 == 0 ? binomial(n, k / 2) : binomial(n - 1, (k - 1) / 2));
    const double amplitude =
        (t_measure * t_state).real() * std::pow(2.0, n) / (count * count);

    AnalyticCurve curve;
    curve.k = k;
    curve.lambda = lambda;
    curve.amplitude = amplitude;
    for (int m : plan.m_list) {
      curve.values.push_back(amplitude * std::pow(lambda, m - 1));
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

MomentPair moment_closed_form(int n, int t) {
  if (n < 1) throw ConfigError("moments need n >= 1");
  if (t < 0 || t % 2 != 0) {
    throw ConfigError("moment closed forms hold for even t >= 0 only");
  }
  MomentPair pair;
  if (t == 0) {
    pair.vacuum = 1.0;
    pair.plus = 1.0;
    return pair;
  }
  double log_product = 0.0;
  for (int i = 1; i <= t; ++i) {
    log_product += std::lgamma(i + n) -
                   0.5 * (std::lgamma(i + 1.0) + std::lgamma(2 * n - 1 + i));
  }
  const double root =
      std::sqrt(static_cast<double>(binomial(n + t / 2 - 1, t / 2)));
  pair.vacuum = std::exp(log_product + std::lgamma(t + 1.0) -
                         std::lgamma(t + n)) *
                root;
  pair.plus = std::exp(log_product) * root *
              static_cast<double>(binomial(2 * (t + n - 1), t)) /
              (std::pow(4.0, t) *
               std::pow(static_cast<double>(binomial(t + n - 1, t)), 2));
  return pair;
}

std::vector<VarianceRow> variance_probe(const RoundPlan& plan,
                                        int repetitions) {
  validate_plan(plan);
  if (repetitions < 2) {
    throw ConfigError("variance probe needs at least 2 repetitions");
  }
  std::map<std::pair<int, int>, std::vector<double>> samples;
  for (int r = 0; r < repetitions; ++r) {
    RoundPlan repeat = plan;
    repeat.seed = derive_seed(plan.seed, kRepetitionTag,
                              static_cast<std::uint64_t>(r));
    const std::vector<ShotBatch> batches =
        run_protocol(repeat, NoiseModel{NoiseNone{}}, BackendChoice::Auto);
    for (int k : plan.k_list) {
      for (int m : plan.m_list) {
        samples[{k, m}].push_back(aggregate(batches, k, m));
      }
    }
  }
  std::vector<VarianceRow> rows;
  for (int k : plan.k_list) {
    for (int m : plan.m_list) {
      const std::vector<double>& values = samples[{k, m}];
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double var = 0.0;
      for (double v : values) var += (v - mean) * (v - mean);
      var /= static_cast<double>(values.size() - 1);
      rows.push_back(VarianceRow{plan.n, k, m,
                                 static_cast<double>(plan.sequences) * var});
    }
  }
  return rows;
}

}  // namespace mgbench
