#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mgbench/compiler.hpp"
#include "mgbench/majorana.hpp"
#include "mgbench/noise.hpp"
#include "mgbench/rng.hpp"

namespace mgbench {

// Fermionic Gaussian state through its covariance matrix,
// Gamma_ab = -i (<gamma_a gamma_b> - delta_ab), real antisymmetric 2n x 2n.
struct CovarianceState {
  int n = 0;
  Eigen::MatrixXd gamma;
};

// Computational basis state |x>.
CovarianceState covariance_from_bits(const std::vector<int>& x);

// Gamma -> Q Gamma Q^T.
void apply_rotation(CovarianceState& state, const Eigen::MatrixXd& q);

// Probability of measuring exactly x in the Z basis,
// 2^{-n} (-1)^{|x|} Pf(Gamma + M_x).
double outcome_probability(const CovarianceState& state,
                           const std::vector<int>& x);

// Marginal probability that the first bits equal `prefix`: the same Pfaffian
// formula restricted to the leading 2j x 2j block.
double prefix_probability(const CovarianceState& state,
                          const std::vector<int>& prefix);

// Draws a full Z-basis outcome bit by bit from conditional marginals.
std::vector<int> sample_outcome(const CovarianceState& state, Rng& rng);

// Draws one component index of a rotation mixture.
int sample_mixture_component(const GaussianB& mix, Rng& rng);

// Executes the circuit on the covariance backend with one sampled noise
// realization (mixtures draw one rotation per call) and returns the
// probability of outcome x.  Only Z-basis SPAM and noise in {None, GaussianB}
// are supported; anything else throws BackendError.
double run_covariance_probability(const GateCircuit& circuit,
                                  const NoiseModel& noise, SpamBasis basis,
                                  const std::vector<int>& x, Rng& rng);

// Same execution model, returning one sampled outcome.
std::vector<int> run_covariance_sample(const GateCircuit& circuit,
                                       const NoiseModel& noise,
                                       SpamBasis basis, Rng& rng);

}  // namespace mgbench
