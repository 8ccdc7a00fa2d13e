#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mgbench/rng.hpp"

namespace mgbench {

// Pfaffian via skew-symmetric tridiagonalization with partial pivoting,
// O(d^3).  Odd dimension returns 0.  Inputs within 1e-12 of antisymmetric
// are accepted as-is, drift up to 1e-10 is antisymmetrized away, and larger
// drift throws NumericError.
double pfaffian(Eigen::MatrixXd a);
std::complex<double> pfaffian(Eigen::MatrixXcd a);

// Coefficients T_s = sum_{|S|=|S'|=s} Pf(A[S]) Pf(B[S']) det(C[S, S']) for
// even s = 0..2d, where S indexes rows of C and S' columns.  Evaluates the
// generating polynomial Pf(A) Pf(-A^{-1} + z^2 C B C^T) at 2d+1 Chebyshev
// nodes and interpolates; returns the even coefficients indexed by s/2.
// Throws NumericError if A is singular or the interpolation residual is
// out of tolerance.
std::vector<double> minor_sum_coefficients(const Eigen::MatrixXd& a,
                                           const Eigen::MatrixXd& b,
                                           const Eigen::MatrixXd& c);

// Element of O(2n): the matrix with its determinant sign cached.
// Orthogonality drift up to 1e-12 is accepted, up to 1e-10 is repaired by
// polar projection, and beyond that construction throws NumericError.
class OrthogonalElement {
 public:
  explicit OrthogonalElement(Eigen::MatrixXd q);

  const Eigen::MatrixXd& matrix() const { return q_; }
  int parity() const { return parity_; }
  int dim() const { return static_cast<int>(q_.rows()); }

  static OrthogonalElement identity(int dim);

 private:
  Eigen::MatrixXd q_;
  int parity_ = 1;
};

// Identity except rows/cols a, b (1-based):
// [[cos t, sin t], [-sin t, cos t]].
Eigen::MatrixXd plane_rotation(int dim, int a, int b, double theta);

// Haar-distributed element of O(2n): QR of a Gaussian matrix with the R
// diagonal signs fixed, then an independent fair bit flips the last column.
OrthogonalElement haar_sample(int n, Rng& rng);

// Staircase factorization R = [G_{2n-1}^{(1)}..G_1^{(1)}][G_{2n-1}^{(2)}..G_2^{(2)}]..[G_{2n-1}^{(2n-1)}]
// of the rotation part of Q, where G_j^{(i)} rotates plane (j, j+1); a parity
// of -1 records an additional reflection of the last axis applied from the
// left.  `rotations` lists (plane, angle) in product order, leftmost first.
struct GivensFactorization {
  int dim = 0;
  std::vector<std::pair<int, double>> rotations;
  int parity = 1;
};

GivensFactorization givens_decompose(const OrthogonalElement& q);
OrthogonalElement givens_reconstruct(const GivensFactorization& f);

}  // namespace mgbench
