#pragma once

#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace mgbench {

// Whether a channel is applied once per sequence element U(Q) or after every
// compiled gate.
enum class NoiseGranularity { PerElement, PerGate };

struct NoiseNone {};

// Kraus-operator channel on n qubits.
struct DenseChannel {
  int n = 0;
  std::vector<Eigen::MatrixXcd> kraus;
  NoiseGranularity granularity = NoiseGranularity::PerElement;
};

// Finite mixture of orthogonal Majorana rotations, weight w_i on R_i.  The
// decay rate on the k-Majorana subspace is the weighted average of e_k over
// the components; for sign mixtures it collapses to e_k of the contraction
// B = sum_i w_i R_i.  The mixture form keeps the channel exactly simulable
// by sampling one R_i per noise event.
struct GaussianB {
  std::vector<double> weights;
  std::vector<Eigen::MatrixXd> rotations;

  int dim() const;
  Eigen::MatrixXd contraction() const;
};

// Base channel plus a perturbation that scales with each gate's angle:
// after every gate, amplitude damping of strength delta * |angle| / pi is
// applied to each qubit the gate acts on.
struct GateDependent {
  DenseChannel base;
  double delta = 0.0;
};

using NoiseModel = std::variant<NoiseNone, DenseChannel, GaussianB, GateDependent>;

// Largest deviation of sum_i K_i^dag K_i from the identity.
double kraus_completeness_drift(const std::vector<Eigen::MatrixXcd>& kraus);

// Throws ConfigError unless the model is well formed and sized for n qubits:
// Kraus operators 2^n x 2^n and complete within 1e-10; mixture weights
// nonnegative summing to 1 within 1e-10 with orthogonal 2n x 2n rotations.
void validate_noise(const NoiseModel& noise, int n);

bool noise_is_per_gate(const NoiseModel& noise);

// Global depolarizing channel rho -> (1-p) rho + p tr(rho) I / 2^n.
DenseChannel depolarizing_channel(
    int n, double p, NoiseGranularity granularity = NoiseGranularity::PerElement);

// Amplitude damping of strength g on one qubit (identity on the rest).
DenseChannel amplitude_damping_channel(
    int n, int qubit, double g,
    NoiseGranularity granularity = NoiseGranularity::PerElement);

// Mixture over all sign patterns s in {-1,+1}^{2n} with components
// R_s = O diag(s) O^T and weights prod_a (1 + s_a b_a) / 2, so that the
// contraction is exactly O diag(b) O^T and the average of every k x k minor
// matches the corresponding minor of the contraction.  Requires |b_a| <= 1;
// zero-weight components are dropped.  Limited to n <= 6.
GaussianB gaussian_sign_mixture(const Eigen::MatrixXd& o,
                                const std::vector<double>& b);

}  // namespace mgbench
