#include "mgbench/noise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "mgbench/errors.hpp"
#include "mgbench/exact.hpp"
#include "mgbench/majorana.hpp"

namespace mgbench {

namespace {

void validate_dense_channel(const DenseChannel& ch, int n) {
  if (ch.n != n) {
    throw ConfigError("dense channel is sized for " + std::to_string(ch.n) +
                      " qubits, circuit has " + std::to_string(n));
  }
  if (ch.n < 1) {
    throw ConfigError("dense channel qubit count must be positive");
  }
  if (ch.kraus.empty()) {
    throw ConfigError("dense channel needs at least one Kraus operator");
  }
  const long dim = 1L << ch.n;
  for (const auto& k : ch.kraus) {
    if (k.rows() != dim || k.cols() != dim) {
      throw ConfigError("Kraus operator must be " + std::to_string(dim) + "x" +
                        std::to_string(dim) + ", got " +
                        std::to_string(k.rows()) + "x" +
                        std::to_string(k.cols()));
    }
  }
  const double drift = kraus_completeness_drift(ch.kraus);
  if (drift > 1e-10) {
    throw ConfigError("Kraus operators are not complete: drift " +
                      std::to_string(drift));
  }
}

void validate_gaussian_b(const GaussianB& g, int n) {
  if (g.weights.empty() || g.weights.size() != g.rotations.size()) {
    throw ConfigError("mixture needs matching nonempty weight and rotation lists");
  }
  double total = 0.0;
  for (double w : g.weights) {
    if (!(w >= 0.0)) {
      throw ConfigError("mixture weights must be nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw ConfigError("mixture weights sum to " + std::to_string(total) +
                      ", expected 1");
  }
  const int dim = 2 * n;
  for (const auto& r : g.rotations) {
    if (r.rows() != dim || r.cols() != dim) {
      throw ConfigError("mixture rotation must be " + std::to_string(dim) +
                        "x" + std::to_string(dim));
    }
    const double drift =
        (r.transpose() * r - Eigen::MatrixXd::Identity(dim, dim))
            .cwiseAbs()
            .maxCoeff();
    if (drift > 1e-10) {
      throw ConfigError("mixture rotation is not orthogonal: drift " +
                        std::to_string(drift));
    }
  }
}

}  // namespace

int GaussianB::dim() const {
  return rotations.empty() ? 0 : static_cast<int>(rotations.front().rows());
}

Eigen::MatrixXd GaussianB::contraction() const {
  const int d = dim();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < rotations.size(); ++i) {
    b += weights[i] * rotations[i];
  }
  return b;
}

double kraus_completeness_drift(const std::vector<Eigen::MatrixXcd>& kraus) {
  if (kraus.empty()) return 0.0;
  const long dim = kraus.front().rows();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& k : kraus) {
    sum += k.adjoint() * k;
  }
  return (sum - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

void validate_noise(const NoiseModel& noise, int n) {
  if (std::holds_alternative<NoiseNone>(noise)) return;
  if (const auto* ch = std::get_if<DenseChannel>(&noise)) {
    validate_dense_channel(*ch, n);
    return;
  }
  if (const auto* g = std::get_if<GaussianB>(&noise)) {
    validate_gaussian_b(*g, n);
    return;
  }
  const auto& gd = std::get<GateDependent>(noise);
  validate_dense_channel(gd.base, n);
  if (!std::isfinite(gd.delta) || gd.delta < 0.0) {
    throw ConfigError("gate-dependent perturbation strength must be a "
                      "nonnegative finite number");
  }
}

bool noise_is_per_gate(const NoiseModel& noise) {
  if (const auto* ch = std::get_if<DenseChannel>(&noise)) {
    return ch->granularity == NoiseGranularity::PerGate;
  }
  if (const auto* gd = std::get_if<GateDependent>(&noise)) {
    return gd->base.granularity == NoiseGranularity::PerGate;
  }
  return false;
}

DenseChannel depolarizing_channel(int n, double p, NoiseGranularity granularity) {
  if (n < 1) throw ConfigError("depolarizing channel needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("depolarizing strength must lie in [0, 1]");
  }
  const double uniform = p / std::pow(4.0, n);
  DenseChannel ch;
  ch.n = n;
  ch.granularity = granularity;
  std::vector<PauliLetter> letters(n, PauliLetter::I);
  while (true) {
    PauliString ps{letters, 0};
    const bool is_identity =
        std::all_of(letters.begin(), letters.end(),
                    [](PauliLetter l) { return l == PauliLetter::I; });
    const double coeff = is_identity ? 1.0 - p + uniform : uniform;
    if (coeff > 0.0) {
      ch.kraus.push_back(std::sqrt(coeff) * pauli_dense(ps));
    }
    int pos = n - 1;
    while (pos >= 0) {
      const int next = (static_cast<int>(letters[pos]) + 1) % 4;
      letters[pos] = static_cast<PauliLetter>(next);
      if (next != 0) break;
      --pos;
    }
    if (pos < 0) break;
  }
  return ch;
}

DenseChannel amplitude_damping_channel(int n, int qubit, double g,
                                       NoiseGranularity granularity) {
  if (n < 1 || qubit < 1 || qubit > n) {
    throw ConfigError("amplitude damping qubit out of range");
  }
  if (!(g >= 0.0 && g <= 1.0)) {
    throw ConfigError("amplitude damping strength must lie in [0, 1]");
  }
  const long dim = 1L << n;
  const long stride = 1L << (n - qubit);
  Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(dim, dim);
  for (long idx = 0; idx < dim; ++idx) {
    const bool excited = (idx / stride) % 2 == 1;
    k0(idx, idx) = excited ? std::sqrt(1.0 - g) : 1.0;
    if (excited) k1(idx - stride, idx) = std::sqrt(g);
  }
  DenseChannel ch;
  ch.n = n;
  ch.granularity = granularity;
  ch.kraus = {k0, k1};
  return ch;
}

GaussianB gaussian_sign_mixture(const Eigen::MatrixXd& o,
                                const std::vector<double>& b) {
  const int dim = static_cast<int>(o.rows());
  if (o.cols() != dim || dim < 2 || dim % 2 != 0) {
    throw ConfigError("sign mixture needs a square even-dimensional frame");
  }
  if (dim > 12) {
    throw ConfigError("sign mixture limited to 2n <= 12, got " +
                      std::to_string(dim));
  }
  const double drift =
      (o.transpose() * o - Eigen::MatrixXd::Identity(dim, dim))
          .cwiseAbs()
          .maxCoeff();
  if (drift > 1e-10) {
    throw ConfigError("sign mixture frame is not orthogonal");
  }
  if (static_cast<int>(b.size()) != dim) {
    throw ConfigError("sign mixture needs one contraction entry per mode");
  }
  for (double v : b) {
    if (!(v >= -1.0 && v <= 1.0)) {
      throw ConfigError("sign mixture contraction entries must lie in [-1, 1]");
    }
  }
  GaussianB mix;
  for (long pattern = 0; pattern < (1L << dim); ++pattern) {
    double weight = 1.0;
    Eigen::VectorXd signs(dim);
    for (int a = 0; a < dim; ++a) {
      const double s = ((pattern >> a) & 1) ? -1.0 : 1.0;
      signs(a) = s;
      weight *= 0.5 * (1.0 + s * b[a]);
    }
    if (weight == 0.0) continue;
    mix.weights.push_back(weight);
    mix.rotations.push_back(o * signs.asDiagonal() * o.transpose());
  }
  return mix;
}

}  // namespace mgbench
