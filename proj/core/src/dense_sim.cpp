#include "mgbench/dense_sim.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <mutex>
#include <set>
#include <string>

#include "mgbench/errors.hpp"
#include "mgbench/exact.hpp"
#include "mgbench/majorana.hpp"

namespace mgbench {

namespace {

using Complex = std::complex<double>;

constexpr Complex kI{0.0, 1.0};

long qubit_mask(int n, int qubit) { return 1L << (n - qubit); }

// In-place Hadamard on every qubit.
void hadamard_all(Eigen::VectorXcd& psi, int n) {
  const long dim = 1L << n;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int q = 1; q <= n; ++q) {
    const long mask = qubit_mask(n, q);
    for (long idx = 0; idx < dim; ++idx) {
      if (idx & mask) continue;
      const Complex a = psi(idx);
      const Complex b = psi(idx | mask);
      psi(idx) = (a + b) * inv_sqrt2;
      psi(idx | mask) = (a - b) * inv_sqrt2;
    }
  }
}

void apply_to_columns(Eigen::MatrixXcd& m, int n, const Gate& gate) {
  Eigen::VectorXcd col(m.rows());
  for (long j = 0; j < m.cols(); ++j) {
    col = m.col(j);
    apply_gate_vector(col, n, gate);
    m.col(j) = col;
  }
}

void apply_damping(Eigen::MatrixXcd& rho, int n, int qubit, double strength) {
  if (strength <= 0.0) return;
  apply_channel(rho, amplitude_damping_channel(n, qubit, strength));
}

void apply_gate_perturbation(Eigen::MatrixXcd& rho, int n,
                             const GateDependent& gd, const Gate& gate) {
  const double strength = gd.delta * std::abs(gate.angle) / M_PI;
  if (strength <= 0.0) return;
  apply_damping(rho, n, gate.qubit, std::min(strength, 1.0));
  if (gate.kind == GateKind::XXRot || gate.kind == GateKind::XYRot) {
    apply_damping(rho, n, gate.qubit + 1, std::min(strength, 1.0));
  }
}

std::vector<double> squared_amplitudes(const Eigen::VectorXcd& psi) {
  std::vector<double> probs(psi.size());
  for (long i = 0; i < psi.size(); ++i) probs[i] = std::norm(psi(i));
  return probs;
}

MajoranaBasisDense build_basis(int n) {
  MajoranaBasisDense basis;
  basis.n = n;
  const double scale = std::pow(2.0, -0.5 * n);
  std::set<std::vector<PauliLetter>> seen;
  basis.block_offset.assign(2 * n + 2, 0);
  for (int k = 0; k <= 2 * n; ++k) {
    basis.block_offset[k] = static_cast<int>(basis.masks.size());
    for (std::uint32_t mask : subset_masks(2 * n, k)) {
      const MajoranaLabel label = make_majorana_label(
          n, subset_from_mask(mask, 2 * n));
      const PauliString pauli = majorana_to_pauli(label);
      if (!seen.insert(pauli.letters).second) {
        throw NumericError("Majorana basis letters collide");
      }
      Eigen::MatrixXcd op = scale * pauli_dense(pauli);
      const double norm = std::abs((op.adjoint() * op).trace().real() - 1.0);
      if (norm > 1e-12) {
        throw NumericError("Majorana basis operator is not normalized");
      }
      basis.masks.push_back(mask);
      basis.operators.push_back(std::move(op));
    }
  }
  basis.block_offset[2 * n + 1] = static_cast<int>(basis.masks.size());
  return basis;
}

Eigen::MatrixXcd dense_majorana_product(int n, std::uint32_t mask) {
  return pauli_dense(
      majorana_to_pauli(make_majorana_label(n, subset_from_mask(mask, 2 * n))));
}

}  // namespace

void apply_gate_vector(Eigen::VectorXcd& psi, int n, const Gate& gate) {
  const long dim = psi.size();
  const int j = gate.qubit;
  switch (gate.kind) {
    case GateKind::ZRot: {
      const long mask = qubit_mask(n, j);
      const Complex up = std::exp(kI * gate.angle);
      const Complex down = std::exp(-kI * gate.angle);
      for (long idx = 0; idx < dim; ++idx) {
        psi(idx) *= (idx & mask) ? down : up;
      }
      break;
    }
    case GateKind::XXRot: {
      const long pair = qubit_mask(n, j) | qubit_mask(n, j + 1);
      const double c = std::cos(gate.angle);
      const Complex is = kI * std::sin(gate.angle);
      for (long idx = 0; idx < dim; ++idx) {
        const long partner = idx ^ pair;
        if (partner < idx) continue;
        const Complex a = psi(idx);
        const Complex b = psi(partner);
        psi(idx) = c * a + is * b;
        psi(partner) = is * a + c * b;
      }
      break;
    }
    case GateKind::XYRot: {
      const long hi = qubit_mask(n, j);
      const long lo = qubit_mask(n, j + 1);
      const double c = std::cos(2.0 * gate.angle);
      const Complex is = kI * std::sin(2.0 * gate.angle);
      for (long idx = 0; idx < dim; ++idx) {
        if (!(idx & hi) || (idx & lo)) continue;  // visit the |..10..> slot
        const long partner = (idx ^ hi) | lo;
        const Complex a = psi(idx);
        const Complex b = psi(partner);
        psi(idx) = c * a + is * b;
        psi(partner) = is * a + c * b;
      }
      break;
    }
    case GateKind::XFlip: {
      const long mask = qubit_mask(n, j);
      for (long idx = 0; idx < dim; ++idx) {
        const long partner = idx ^ mask;
        if (partner < idx) continue;
        std::swap(psi(idx), psi(partner));
      }
      break;
    }
  }
}

void apply_gate_density(Eigen::MatrixXcd& rho, int n, const Gate& gate) {
  apply_to_columns(rho, n, gate);
  rho.adjointInPlace();
  apply_to_columns(rho, n, gate);
  rho.adjointInPlace();
}

void apply_channel(Eigen::MatrixXcd& rho, const DenseChannel& channel) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto& k : channel.kraus) {
    out.noalias() += k * rho * k.adjoint();
  }
  rho = std::move(out);
}

void apply_noise_event(Eigen::MatrixXcd& rho, [[maybe_unused]] int n,
                       const NoiseModel& noise) {
  if (std::holds_alternative<NoiseNone>(noise)) return;
  if (const auto* ch = std::get_if<DenseChannel>(&noise)) {
    apply_channel(rho, *ch);
    return;
  }
  if (const auto* gd = std::get_if<GateDependent>(&noise)) {
    apply_channel(rho, gd->base);
    return;
  }
  const auto& mix = std::get<GaussianB>(noise);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < mix.rotations.size(); ++i) {
    const Eigen::MatrixXcd u =
        dense_unitary(compile(OrthogonalElement(mix.rotations[i])));
    out.noalias() += mix.weights[i] * (u * rho * u.adjoint());
  }
  rho = std::move(out);
}

Eigen::VectorXcd spam_vector(int n, SpamBasis basis) {
  const long dim = 1L << n;
  if (basis == SpamBasis::Z) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = 1.0;
    return psi;
  }
  return Eigen::VectorXcd::Constant(dim, std::pow(2.0, -0.5 * n));
}

Eigen::MatrixXcd spam_density(int n, SpamBasis basis) {
  const Eigen::VectorXcd psi = spam_vector(n, basis);
  return psi * psi.adjoint();
}

void apply_circuit_density(Eigen::MatrixXcd& rho, const GateCircuit& circuit,
                           const NoiseModel& noise) {
  validate_circuit(circuit);
  validate_noise(noise, circuit.n);
  const bool per_gate = noise_is_per_gate(noise);
  const auto* gd = std::get_if<GateDependent>(&noise);
  for (const Gate& gate : circuit.gates) {
    apply_gate_density(rho, circuit.n, gate);
    if (gd != nullptr) apply_gate_perturbation(rho, circuit.n, *gd, gate);
    if (per_gate) {
      const DenseChannel& base =
          gd != nullptr ? gd->base : std::get<DenseChannel>(noise);
      apply_channel(rho, base);
    }
  }
  if (!per_gate) apply_noise_event(rho, circuit.n, noise);
}

Eigen::MatrixXcd dense_unitary(const GateCircuit& circuit) {
  validate_circuit(circuit);
  const long dim = 1L << circuit.n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const Gate& gate : circuit.gates) {
    apply_to_columns(u, circuit.n, gate);
  }
  return u;
}

std::vector<double> measurement_probabilities(const Eigen::VectorXcd& psi,
                                              int n, SpamBasis basis) {
  if (basis == SpamBasis::Z) return squared_amplitudes(psi);
  Eigen::VectorXcd rotated = psi;
  hadamard_all(rotated, n);
  return squared_amplitudes(rotated);
}

std::vector<double> measurement_probabilities(const Eigen::MatrixXcd& rho,
                                              int n, SpamBasis basis) {
  const long dim = rho.rows();
  std::vector<double> probs(dim);
  if (basis == SpamBasis::Z) {
    for (long i = 0; i < dim; ++i) probs[i] = rho(i, i).real();
    return probs;
  }
  Eigen::MatrixXcd rotated = rho;
  for (long j = 0; j < dim; ++j) {
    Eigen::VectorXcd col = rotated.col(j);
    hadamard_all(col, n);
    rotated.col(j) = col;
  }
  rotated.adjointInPlace();
  for (long j = 0; j < dim; ++j) {
    Eigen::VectorXcd col = rotated.col(j);
    hadamard_all(col, n);
    rotated.col(j) = col;
  }
  for (long i = 0; i < dim; ++i) probs[i] = rotated(i, i).real();
  return probs;
}

std::vector<double> run_dense(const GateCircuit& circuit,
                              const NoiseModel& noise, SpamBasis basis,
                              const DenseLimits& limits) {
  validate_circuit(circuit);
  validate_noise(noise, circuit.n);
  if (std::holds_alternative<NoiseNone>(noise)) {
    if (circuit.n > limits.statevector) {
      throw BackendError("dense statevector limited to n <= " +
                         std::to_string(limits.statevector) + ", got " +
                         std::to_string(circuit.n));
    }
    Eigen::VectorXcd psi = spam_vector(circuit.n, basis);
    for (const Gate& gate : circuit.gates) {
      apply_gate_vector(psi, circuit.n, gate);
    }
    return measurement_probabilities(psi, circuit.n, basis);
  }
  if (circuit.n > limits.channels) {
    throw BackendError("dense channel evolution limited to n <= " +
                       std::to_string(limits.channels) + ", got " +
                       std::to_string(circuit.n));
  }
  Eigen::MatrixXcd rho = spam_density(circuit.n, basis);
  apply_circuit_density(rho, circuit, noise);
  return measurement_probabilities(rho, circuit.n, basis);
}

std::vector<long> run_dense_shots(const GateCircuit& circuit,
                                  const NoiseModel& noise, SpamBasis basis,
                                  long shots, Rng& rng,
                                  const DenseLimits& limits) {
  if (shots < 0) throw ConfigError("shot count must be nonnegative");
  const std::vector<double> probs = run_dense(circuit, noise, basis, limits);
  std::vector<long> counts(probs.size(), 0);
  for (long s = 0; s < shots; ++s) {
    ++counts[sample_index(probs, rng)];
  }
  return counts;
}

long sample_index(const std::vector<double>& probabilities, Rng& rng) {
  double total = 0.0;
  for (double p : probabilities) total += p;
  const double target = rng.uniform() * total;
  double cumulative = 0.0;
  long last = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    cumulative += probabilities[i];
    last = static_cast<long>(i);
    if (target < cumulative) return last;
  }
  return last;
}

int MajoranaBasisDense::index_of(std::uint64_t mask) const {
  const int k = __builtin_popcountll(mask);
  for (int i = block_offset[k]; i < block_offset[k + 1]; ++i) {
    if (masks[i] == mask) return i;
  }
  throw ConfigError("mask is not part of the Majorana basis");
}

const MajoranaBasisDense& majorana_basis(int n) {
  if (n < 1 || n > 5) {
    throw BackendError("Majorana basis cache limited to 1 <= n <= 5, got " +
                       std::to_string(n));
  }
  static std::mutex mu;
  static std::map<int, MajoranaBasisDense> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, build_basis(n)).first;
  }
  return it->second;
}

SuperoperatorDense channel_superop(const DenseChannel& channel) {
  validate_noise(NoiseModel{channel}, channel.n);
  const MajoranaBasisDense& basis = majorana_basis(channel.n);
  SuperoperatorDense op;
  op.n = channel.n;
  op.matrix.resize(basis.size(), basis.size());
  for (int s = 0; s < basis.size(); ++s) {
    Eigen::MatrixXcd image =
        Eigen::MatrixXcd::Zero(basis.operators[s].rows(),
                               basis.operators[s].cols());
    for (const auto& k : channel.kraus) {
      image.noalias() += k * basis.operators[s] * k.adjoint();
    }
    for (int t = 0; t < basis.size(); ++t) {
      op.matrix(t, s) = (basis.operators[t].adjoint() * image).trace();
    }
  }
  return op;
}

SuperoperatorDense conjugation_superop(const Eigen::MatrixXcd& u) {
  const long dim = u.rows();
  int n = 0;
  while ((1L << n) < dim) ++n;
  if ((1L << n) != dim || u.cols() != dim) {
    throw ConfigError("conjugation superoperator needs a square 2^n matrix");
  }
  const MajoranaBasisDense& basis = majorana_basis(n);
  SuperoperatorDense op;
  op.n = n;
  op.matrix.resize(basis.size(), basis.size());
  for (int s = 0; s < basis.size(); ++s) {
    const Eigen::MatrixXcd image = u * basis.operators[s] * u.adjoint();
    for (int t = 0; t < basis.size(); ++t) {
      op.matrix(t, s) = (basis.operators[t].adjoint() * image).trace();
    }
  }
  return op;
}

SuperoperatorDense projector_superop(int n, int k) {
  if (n < 1) throw ConfigError("projector needs n >= 1");
  if (k < 0 || k > 2 * n) {
    throw ConfigError("projector subspace index out of range");
  }
  long size = 0;
  long offset = 0;
  for (int j = 0; j <= 2 * n; ++j) {
    const long block = binomial(2 * n, j);
    if (j < k) offset += block;
    size += block;
  }
  SuperoperatorDense op;
  op.n = n;
  op.matrix = Eigen::MatrixXcd::Zero(size, size);
  const long block = binomial(2 * n, k);
  for (long i = 0; i < block; ++i) {
    op.matrix(offset + i, offset + i) = 1.0;
  }
  return op;
}

double lambda_exact(const NoiseModel& noise, int n, int k) {
  if (n < 1) throw ConfigError("lambda needs n >= 1");
  if (k < 0 || k > 2 * n) {
    throw ConfigError("lambda subspace index out of range [0, " +
                      std::to_string(2 * n) + "]");
  }
  if (std::holds_alternative<NoiseNone>(noise)) return 1.0;
  if (std::holds_alternative<GateDependent>(noise)) {
    throw BackendError(
        "gate-dependent noise has no single subspace decay rate; "
        "fit the measured decay instead");
  }
  if (const auto* mix = std::get_if<GaussianB>(&noise)) {
    validate_noise(noise, n);
    double total = 0.0;
    for (std::size_t i = 0; i < mix->weights.size(); ++i) {
      total += mix->weights[i] * elementary_symmetric(mix->rotations[i])[k];
    }
    return total / static_cast<double>(binomial(2 * n, k));
  }
  const auto& ch = std::get<DenseChannel>(noise);
  validate_noise(noise, n);
  if (n > 6) {
    throw BackendError("dense decay rates limited to n <= 6, got " +
                       std::to_string(n));
  }
  const double scale = std::pow(2.0, -n);
  double total = 0.0;
  for (std::uint32_t mask : subset_masks(2 * n, k)) {
    const Eigen::MatrixXcd g = dense_majorana_product(n, mask);
    Eigen::MatrixXcd image = Eigen::MatrixXcd::Zero(g.rows(), g.cols());
    for (const auto& kr : ch.kraus) {
      image.noalias() += kr * g * kr.adjoint();
    }
    total += (g.adjoint() * image).trace().real() * scale;
  }
  return total / static_cast<double>(binomial(2 * n, k));
}

double favg_exact(const DenseChannel& channel) {
  validate_noise(NoiseModel{channel}, channel.n);
  const int n = channel.n;
  if (n > 6) {
    throw BackendError("dense fidelity limited to n <= 6, got " +
                       std::to_string(n));
  }
  const double drift = kraus_completeness_drift(channel.kraus);
  if (drift > 1e-10) {
    std::fprintf(stderr,
                 "warning: channel is not trace-preserving (drift %.3e); "
                 "computing average fidelity anyway\n",
                 drift);
  }
  const double scale = std::pow(2.0, -n);
  double trace = 0.0;
  for (int k = 0; k <= 2 * n; ++k) {
    for (std::uint32_t mask : subset_masks(2 * n, k)) {
      const Eigen::MatrixXcd g = dense_majorana_product(n, mask);
      Eigen::MatrixXcd image = Eigen::MatrixXcd::Zero(g.rows(), g.cols());
      for (const auto& kr : channel.kraus) {
        image.noalias() += kr * g * kr.adjoint();
      }
      trace += (g.adjoint() * image).trace().real() * scale;
    }
  }
  return (scale * trace + 1.0) / (std::pow(2.0, n) + 1.0);
}

std::vector<double> elementary_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw ConfigError("elementary symmetric polynomials need a square matrix");
  }
  const int dim = static_cast<int>(m.rows());
  std::vector<double> e(dim + 1, 0.0);
  e[0] = 1.0;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(dim, dim);
  double c = 1.0;
  for (int j = 1; j <= dim; ++j) {
    acc = m * acc;
    c = -acc.trace() / j;
    e[j] = (j % 2 == 0) ? c : -c;
    acc.diagonal().array() += c;
  }
  return e;
}

}  // namespace mgbench
