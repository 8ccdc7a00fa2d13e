#include "mgbench/covariance_sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mgbench/errors.hpp"
#include "mgbench/skew.hpp"

namespace mgbench {

namespace {

int parity_sign(const std::vector<int>& bits) {
  int ones = 0;
  for (int b : bits) ones += b;
  return ones % 2 == 0 ? 1 : -1;
}

void check_backend_support(const NoiseModel& noise, SpamBasis basis) {
  if (basis == SpamBasis::X) {
    throw BackendError(
        "covariance backend serves Z-basis SPAM only; "
        "use the dense backend for X-basis rounds");
  }
  if (!std::holds_alternative<NoiseNone>(noise) &&
      !std::holds_alternative<GaussianB>(noise)) {
    throw BackendError(
        "covariance backend supports noiseless runs or rotation mixtures only");
  }
}

CovarianceState evolve(const GateCircuit& circuit, const NoiseModel& noise,
                       Rng& rng) {
  CovarianceState state =
      covariance_from_bits(std::vector<int>(circuit.n, 0));
  apply_rotation(state, induced_rotation(circuit).matrix());
  if (const auto* mix = std::get_if<GaussianB>(&noise)) {
    apply_rotation(state, mix->rotations[sample_mixture_component(*mix, rng)]);
  }
  return state;
}

}  // namespace

CovarianceState covariance_from_bits(const std::vector<int>& x) {
  CovarianceState state;
  state.n = static_cast<int>(x.size());
  state.gamma = spam_matrix(x);
  return state;
}

void apply_rotation(CovarianceState& state, const Eigen::MatrixXd& q) {
  const int dim = 2 * state.n;
  if (q.rows() != dim || q.cols() != dim) {
    throw ConfigError("rotation must be " + std::to_string(dim) + "x" +
                      std::to_string(dim) + " to act on " +
                      std::to_string(state.n) + " modes");
  }
  state.gamma = q * state.gamma * q.transpose();
}

double outcome_probability(const CovarianceState& state,
                           const std::vector<int>& x) {
  if (static_cast<int>(x.size()) != state.n) {
    throw ConfigError("outcome length does not match the mode count");
  }
  return prefix_probability(state, x);
}

double prefix_probability(const CovarianceState& state,
                          const std::vector<int>& prefix) {
  const int j = static_cast<int>(prefix.size());
  if (j > state.n) {
    throw ConfigError("prefix is longer than the register");
  }
  if (j == 0) return 1.0;
  const Eigen::MatrixXd block =
      state.gamma.topLeftCorner(2 * j, 2 * j) + spam_matrix(prefix);
  return parity_sign(prefix) * pfaffian(block) / std::pow(2.0, j);
}

std::vector<int> sample_outcome(const CovarianceState& state, Rng& rng) {
  std::vector<int> bits;
  bits.reserve(state.n);
  double current = 1.0;
  for (int j = 1; j <= state.n; ++j) {
    bits.push_back(0);
    const double with_zero = prefix_probability(state, bits);
    const double conditional =
        current > 0.0 ? std::clamp(with_zero / current, 0.0, 1.0) : 0.0;
    if (rng.uniform() < conditional) {
      current = with_zero;
    } else {
      bits.back() = 1;
      current = std::max(current - with_zero, 0.0);
    }
  }
  return bits;
}

int sample_mixture_component(const GaussianB& mix, Rng& rng) {
  double total = 0.0;
  for (double w : mix.weights) total += w;
  const double target = rng.uniform() * total;
  double cumulative = 0.0;
  int last = 0;
  for (std::size_t i = 0; i < mix.weights.size(); ++i) {
    if (mix.weights[i] <= 0.0) continue;
    cumulative += mix.weights[i];
    last = static_cast<int>(i);
    if (target < cumulative) return last;
  }
  return last;
}

double run_covariance_probability(const GateCircuit& circuit,
                                  const NoiseModel& noise, SpamBasis basis,
                                  const std::vector<int>& x, Rng& rng) {
  validate_circuit(circuit);
  validate_noise(noise, circuit.n);
  check_backend_support(noise, basis);
  const CovarianceState state = evolve(circuit, noise, rng);
  return outcome_probability(state, x);
}

std::vector<int> run_covariance_sample(const GateCircuit& circuit,
                                       const NoiseModel& noise,
                                       SpamBasis basis, Rng& rng) {
  validate_circuit(circuit);
  validate_noise(noise, circuit.n);
  check_backend_support(noise, basis);
  const CovarianceState state = evolve(circuit, noise, rng);
  return sample_outcome(state, rng);
}

}  // namespace mgbench
