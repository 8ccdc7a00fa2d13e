#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "mgbench/majorana.hpp"
#include "mgbench/skew.hpp"

namespace mgbench {

// Orthogonal element with U(Q_x) H^{otimes n} |x> = (I + i gamma_1)/sqrt(2) |0...0>
// up to phase: a signed mode permutation determined by the bit pattern.
OrthogonalElement build_qx(const std::vector<int>& x);

// Correlation coefficient alpha_k(x, Q) of the k-th Majorana subspace for a
// Z-basis round (k even): the degree-k coefficient of the minor-sum
// generating function of (M_x, M_0, Q), rescaled by C(2n,k)/C(n,k/2)^2.
// Sign and scale are pinned by the dense-superoperator oracle.
double alpha_even(const std::vector<int>& x, const OrthogonalElement& q, int k);

// Same coefficient for an X-basis round (k odd), evaluated on the reduced
// (2n-2)-mode Pfaffian expression after rotating both SPAM ends by build_qx.
double alpha_odd(const std::vector<int>& x, const OrthogonalElement& q, int k);

// Parity dispatch to alpha_even / alpha_odd.
double alpha(const std::vector<int>& x, const OrthogonalElement& q, int k);

// tr(E_x gamma[S]) where E_x projects onto outcome x of the given basis.
// Nonzero only when the Pauli realization of gamma[S] is diagonal in that
// basis, in which case it is a fourth root of unity times a sign.
std::complex<double> correlator(const std::vector<int>& x,
                                const MajoranaLabel& s, SpamBasis basis);

}  // namespace mgbench
