#include "mgbench/correlation.hpp"

#include <cmath>
#include <string>

#include "mgbench/errors.hpp"
#include "mgbench/exact.hpp"

namespace mgbench {

namespace {

void check_bits(const std::vector<int>& x) {
  if (x.empty()) throw ConfigError("bitstring must be nonempty");
  for (int b : x) {
    if (b != 0 && b != 1) throw ConfigError("bitstring entries must be 0 or 1");
  }
}

void check_subspace(int k, int n, bool want_even) {
  if (k < 0 || k > 2 * n) {
    throw ConfigError("subspace index " + std::to_string(k) +
                      " out of range [0, " + std::to_string(2 * n) + "]");
  }
  if ((k % 2 == 0) != want_even) {
    throw ConfigError(want_even ? "alpha_even needs even k"
                                : "alpha_odd needs odd k");
  }
}

// 2^{-n} / N_k, with the diagonal-product count C(n, k/2) for even k and
// C(n-1, (k-1)/2) for odd k.
double inverse_normalization(int n, int k) {
  const double count = static_cast<double>(
      k % 2 == 0 ? binomial(n, k / 2) : binomial(n - 1, (k - 1) / 2));
  return static_cast<double>(binomial(2 * n, k)) / (count * count);
}

}  // namespace

OrthogonalElement build_qx(const std::vector<int>& x) {
  check_bits(x);
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  q(1, 0) = x[0] == 0 ? 1.0 : -1.0;
  for (int j = 1; j < n; ++j) {
    q(2 * j, 2 * j - 1) = 1.0;
    q(2 * j + 1, 2 * j) = (x[j - 1] + x[j]) % 2 == 0 ? 1.0 : -1.0;
  }
  q(0, 2 * n - 1) = 1.0;
  return OrthogonalElement(q);
}

double alpha_even(const std::vector<int>& x, const OrthogonalElement& q,
                  int k) {
  check_bits(x);
  const int n = static_cast<int>(x.size());
  check_subspace(k, n, true);
  if (q.dim() != 2 * n) {
    throw ConfigError("rotation dimension does not match the bitstring");
  }
  if (k == 0) return 1.0;
  const Eigen::MatrixXd mx = spam_matrix(x);
  const Eigen::MatrixXd m0 = spam_matrix(std::vector<int>(n, 0));
  const std::vector<double> coeffs =
      minor_sum_coefficients(mx, m0, q.matrix());
  return inverse_normalization(n, k) * coeffs[k / 2];
}

double alpha_odd(const std::vector<int>& x, const OrthogonalElement& q,
                 int k) {
  check_bits(x);
  const int n = static_cast<int>(x.size());
  check_subspace(k, n, false);
  if (q.dim() != 2 * n) {
    throw ConfigError("rotation dimension does not match the bitstring");
  }
  const int reduced = 2 * n - 2;
  const Eigen::MatrixXd w = build_qx(x).matrix() * q.matrix() *
                            build_qx(std::vector<int>(n, 0)).matrix().transpose();
  const Eigen::MatrixXd m0 = spam_matrix(std::vector<int>(n, 0));

  // Augmented system: a spectator mode pair carries the gamma_2 insertion of
  // the odd-k formula, so one even minor-sum evaluation covers it; the
  // spectator-free part is removed again by the reduced evaluation.
  Eigen::MatrixXd a_hat = Eigen::MatrixXd::Zero(reduced + 2, reduced + 2);
  a_hat(0, 1) = 1.0;
  a_hat(1, 0) = -1.0;
  a_hat.bottomRightCorner(reduced, reduced) =
      m0.bottomRightCorner(reduced, reduced);
  Eigen::MatrixXd c_hat = Eigen::MatrixXd::Zero(reduced + 2, reduced + 2);
  c_hat(0, 0) = 1.0;
  c_hat.bottomRightCorner(reduced + 1, reduced + 1) =
      w.bottomRightCorner(reduced + 1, reduced + 1);

  const std::vector<double> augmented =
      minor_sum_coefficients(a_hat, a_hat, c_hat);
  double value = augmented[(k + 1) / 2];
  if (k + 1 <= reduced) {
    const Eigen::MatrixXd m_tilde = m0.bottomRightCorner(reduced, reduced);
    const Eigen::MatrixXd v_tilde = w.bottomRightCorner(reduced, reduced);
    const std::vector<double> plain =
        minor_sum_coefficients(m_tilde, m_tilde, v_tilde);
    value -= plain[(k + 1) / 2];
  }
  return inverse_normalization(n, k) * value;
}

double alpha(const std::vector<int>& x, const OrthogonalElement& q, int k) {
  return k % 2 == 0 ? alpha_even(x, q, k) : alpha_odd(x, q, k);
}

std::complex<double> correlator(const std::vector<int>& x,
                                const MajoranaLabel& s, SpamBasis basis) {
  check_bits(x);
  if (static_cast<int>(x.size()) != s.n) {
    throw ConfigError("bitstring length does not match the label's register");
  }
  PauliString pauli = majorana_to_pauli(s);
  if (basis == SpamBasis::X) {
    // Conjugation by H^{otimes n}: X <-> Z, Y -> -Y.
    for (auto& letter : pauli.letters) {
      if (letter == PauliLetter::X) {
        letter = PauliLetter::Z;
      } else if (letter == PauliLetter::Z) {
        letter = PauliLetter::X;
      } else if (letter == PauliLetter::Y) {
        pauli.phase_quarter = (pauli.phase_quarter + 2) % 4;
      }
    }
  }
  int sign = 0;
  for (int j = 0; j < s.n; ++j) {
    const PauliLetter letter = pauli.letters[j];
    if (letter == PauliLetter::X || letter == PauliLetter::Y) {
      return 0.0;
    }
    if (letter == PauliLetter::Z) sign += x[j];
  }
  std::complex<double> value = pauli.phase();
  return sign % 2 == 0 ? value : -value;
}

}  // namespace mgbench
