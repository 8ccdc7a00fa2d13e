#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mgbench/compiler.hpp"
#include "mgbench/majorana.hpp"
#include "mgbench/noise.hpp"
#include "mgbench/rng.hpp"

namespace mgbench {

struct DenseLimits {
  int statevector = 10;
  int channels = 6;
};

// In-place action of one gate on a statevector of 2^n amplitudes, basis
// index sum_j x_j 2^{n-j}.
void apply_gate_vector(Eigen::VectorXcd& psi, int n, const Gate& gate);

// rho -> U rho U^dag for one gate.
void apply_gate_density(Eigen::MatrixXcd& rho, int n, const Gate& gate);

// rho -> sum_i K_i rho K_i^dag.
void apply_channel(Eigen::MatrixXcd& rho, const DenseChannel& channel);

// One per-element noise event: dense channels apply their Kraus sum,
// mixtures apply the weighted sum over compiled rotation components,
// GateDependent applies its base channel.
void apply_noise_event(Eigen::MatrixXcd& rho, int n, const NoiseModel& noise);

Eigen::VectorXcd spam_vector(int n, SpamBasis basis);
Eigen::MatrixXcd spam_density(int n, SpamBasis basis);

// Full circuit applied to rho, interleaving per-gate noise where the model
// requests it and finishing with one per-element noise event otherwise.
void apply_circuit_density(Eigen::MatrixXcd& rho, const GateCircuit& circuit,
                           const NoiseModel& noise);

// Unitary of the whole circuit (no noise), 2^n x 2^n.
Eigen::MatrixXcd dense_unitary(const GateCircuit& circuit);

std::vector<double> measurement_probabilities(const Eigen::VectorXcd& psi,
                                              int n, SpamBasis basis);
std::vector<double> measurement_probabilities(const Eigen::MatrixXcd& rho,
                                              int n, SpamBasis basis);

// Exact Born probabilities of one noisy circuit, indexed by basis index.
// Noise-free circuits run as statevectors (limit limits.statevector qubits);
// anything else runs as a density matrix (limit limits.channels).  Throws
// BackendError beyond the limits.
std::vector<double> run_dense(const GateCircuit& circuit,
                              const NoiseModel& noise, SpamBasis basis,
                              const DenseLimits& limits = {});

// Draws `shots` outcomes from the exact distribution; returns counts per
// basis index.
std::vector<long> run_dense_shots(const GateCircuit& circuit,
                                  const NoiseModel& noise, SpamBasis basis,
                                  long shots, Rng& rng,
                                  const DenseLimits& limits = {});

// Draws one index from a probability table.
long sample_index(const std::vector<double>& probabilities, Rng& rng);

// Normalized Majorana-product operator basis {2^{-n/2} gamma[S]}, masks
// sorted by (popcount, value); bit j-1 of a mask marks Majorana index j.
// Verified orthonormal on construction.
struct MajoranaBasisDense {
  int n = 0;
  std::vector<std::uint64_t> masks;
  std::vector<Eigen::MatrixXcd> operators;
  std::vector<int> block_offset;  // block_offset[k] = first index with |S| = k

  int size() const { return static_cast<int>(masks.size()); }
  int index_of(std::uint64_t mask) const;
};

// Cached per n; limited to n <= 5.
const MajoranaBasisDense& majorana_basis(int n);

// 4^n x 4^n matrix acting on vectorized operators in the basis above.
struct SuperoperatorDense {
  int n = 0;
  Eigen::MatrixXcd matrix;
};

SuperoperatorDense channel_superop(const DenseChannel& channel);

// Superoperator of rho -> U rho U^dag.
SuperoperatorDense conjugation_superop(const Eigen::MatrixXcd& u);

// Orthogonal projector onto span{gamma[S] : |S| = k}; diagonal 0/1 in the
// Majorana basis.
SuperoperatorDense projector_superop(int n, int k);

// Decay rate of the k-th Majorana subspace: tr(P_k Lambda) / C(2n, k) for
// dense channels, e_k(eigenvalues of the contraction) / C(2n, k) for
// mixtures, 1 for no noise.  GateDependent models have no single rate and
// throw BackendError.
double lambda_exact(const NoiseModel& noise, int n, int k);

// Average gate fidelity (2^{-n} tr(Lambda) + 1) / (2^n + 1) from the
// superoperator trace.  Warns on stderr if the channel is not
// trace-preserving and computes anyway.
double favg_exact(const DenseChannel& channel);

// Elementary symmetric polynomials e_0..e_N of the eigenvalues of a real
// N x N matrix, via the characteristic polynomial.
std::vector<double> elementary_symmetric(const Eigen::MatrixXd& m);

}  // namespace mgbench
