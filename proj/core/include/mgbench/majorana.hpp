#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mgbench/exact.hpp"

namespace mgbench {

enum class PauliLetter : std::uint8_t { I, X, Y, Z };

char pauli_char(PauliLetter p);

// n-qubit Pauli operator with an exact fourth-root-of-unity phase: the
// operator equals i^phase_quarter times the tensor product of the letters.
struct PauliString {
  std::vector<PauliLetter> letters;
  int phase_quarter = 0;  // mod 4

  int n() const { return static_cast<int>(letters.size()); }
  std::complex<double> phase() const;
};

PauliString pauli_identity(int n);
PauliString pauli_multiply(const PauliString& a, const PauliString& b);

// Ordered product of Jordan-Wigner Majorana operators over a strictly
// increasing index set S within [1, 2n]; empty S is the identity.
struct MajoranaLabel {
  int n = 0;
  std::vector<int> indices;
};

// Validates ordering and range.
MajoranaLabel make_majorana_label(int n, std::vector<int> indices);

// Pauli realization of the ordered product gamma[S], with
// gamma_{2j-1} = Z_1..Z_{j-1} X_j and gamma_{2j} = Z_1..Z_{j-1} Y_j.
PauliString majorana_to_pauli(const MajoranaLabel& label);

// Dense 2^n x 2^n matrix of a Pauli string.  Basis index of |x> is
// sum_j x_j 2^{n-j} (qubit 1 most significant).
Eigen::MatrixXcd pauli_dense(const PauliString& p);

// State preparation and measurement basis.  Z prepares |0...0> and measures
// in the computational basis; X prepares |+...+> and measures in the
// Hadamard-rotated basis.
enum class SpamBasis { Z, X };

// Antisymmetric 2n x 2n matrix M_x: block-diagonal, j-th block
// [[0, s_j], [-s_j, 0]] with s_j = (-1)^{x_j}.
Eigen::MatrixXd spam_matrix(const std::vector<int>& x);

// Exact normalization constants N_k = 2^{-n} C(n, floor(k/2))^2 / C(2n, k)
// for k = 0..2n.
struct NormalizationTable {
  int n = 0;
  std::vector<Rational> values;
};

NormalizationTable normalizations(int n);

// dim span{gamma[S] : |S| = k} = C(2n, k).
std::int64_t subspace_dimension(int n, int k);

// Bitstring helpers; bit vectors hold 0/1 with x[j] the (j+1)-th qubit.
std::vector<int> bits_from_index(std::uint64_t index, int n);
std::uint64_t index_from_bits(const std::vector<int>& x);
std::string bits_to_string(const std::vector<int>& x);
std::vector<int> bits_from_string(const std::string& s);

// Subset masks over [1, 2n]: bit j-1 of the mask set means j is in S.
std::vector<int> subset_from_mask(std::uint32_t mask, int dim);

// All C(dim, k) masks of popcount k over `dim` indices, ascending by value.
std::vector<std::uint32_t> subset_masks(int dim, int k);

}  // namespace mgbench
