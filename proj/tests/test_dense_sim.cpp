#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "mgbench/dense_sim.hpp"
#include "mgbench/errors.hpp"
#include "mgbench/exact.hpp"
#include "mgbench/rng.hpp"
#include "oracles.hpp"

using namespace mgbench;

namespace {

Eigen::MatrixXcd random_density(int dim, Rng& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      g(i, j) = std::complex<double>(rng.normal(), rng.normal());
    }
  }
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST_SUITE("dense_sim") {

TEST_CASE("single-gate unitaries have their closed forms") {
  const double t = 0.41;
  const std::complex<double> im(0.0, 1.0);

  const Eigen::MatrixXcd uz = dense_unitary({1, {{GateKind::ZRot, 1, t}}});
  CHECK(std::abs(uz(0, 0) - std::exp(im * t)) < 1e-14);
  CHECK(std::abs(uz(1, 1) - std::exp(-im * t)) < 1e-14);
  CHECK(std::abs(uz(0, 1)) + std::abs(uz(1, 0)) < 1e-14);

  const Eigen::MatrixXcd uxx = dense_unitary({2, {{GateKind::XXRot, 1, t}}});
  Eigen::MatrixXcd xx = Eigen::MatrixXcd::Zero(4, 4);
  xx(0, 3) = xx(1, 2) = xx(2, 1) = xx(3, 0) = 1.0;
  const Eigen::MatrixXcd expected_xx =
      std::cos(t) * Eigen::MatrixXcd::Identity(4, 4) + im * std::sin(t) * xx;
  CHECK((uxx - expected_xx).cwiseAbs().maxCoeff() < 1e-14);

  const Eigen::MatrixXcd uxy = dense_unitary({2, {{GateKind::XYRot, 1, t}}});
  Eigen::MatrixXcd expected_xy = Eigen::MatrixXcd::Identity(4, 4);
  expected_xy(1, 1) = expected_xy(2, 2) = std::cos(2 * t);
  expected_xy(1, 2) = expected_xy(2, 1) = im * std::sin(2 * t);
  CHECK((uxy - expected_xy).cwiseAbs().maxCoeff() < 1e-14);

  const Eigen::MatrixXcd uflip = dense_unitary({2, {{GateKind::XFlip, 2, 0.0}}});
  Eigen::MatrixXcd expected_flip = Eigen::MatrixXcd::Zero(4, 4);
  expected_flip(0, 1) = expected_flip(1, 0) = 1.0;
  expected_flip(2, 3) = expected_flip(3, 2) = 1.0;
  CHECK((uflip - expected_flip).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("statevector and density evolutions agree") {
  Rng rng(501);
  const OrthogonalElement q = haar_sample(2, rng);
  const GateCircuit circuit = compile(q);

  Eigen::VectorXcd psi = spam_vector(2, SpamBasis::Z);
  for (const Gate& g : circuit.gates) apply_gate_vector(psi, 2, g);

  Eigen::MatrixXcd rho = spam_density(2, SpamBasis::Z);
  for (const Gate& g : circuit.gates) apply_gate_density(rho, 2, g);

  CHECK((rho - psi * psi.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  const auto pv = measurement_probabilities(psi, 2, SpamBasis::Z);
  const auto pd = measurement_probabilities(rho, 2, SpamBasis::Z);
  for (int idx = 0; idx < 4; ++idx) {
    CHECK(pv[idx] == doctest::Approx(pd[idx]).epsilon(1e-12));
  }
}

TEST_CASE("spam states") {
  const Eigen::VectorXcd z = spam_vector(2, SpamBasis::Z);
  CHECK(std::abs(z(0) - 1.0) < 1e-15);
  CHECK(z.tail(3).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::VectorXcd x = spam_vector(2, SpamBasis::X);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(x(i) - 0.5) < 1e-15);
  const auto px = measurement_probabilities(x, 2, SpamBasis::X);
  CHECK(px[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact probabilities match overlaps with the circuit unitary") {
  Rng rng(502);
  for (int n = 1; n <= 3; ++n) {
    const GateCircuit circuit = compile(haar_sample(n, rng));
    const Eigen::MatrixXcd u = dense_unitary(circuit);
    for (SpamBasis basis : {SpamBasis::Z, SpamBasis::X}) {
      const auto probs = run_dense(circuit, NoiseNone{}, basis);
      const Eigen::VectorXcd out = u * spam_vector(n, basis);
      double total = 0.0;
      for (int idx = 0; idx < (1 << n); ++idx) {
        Eigen::VectorXcd effect = Eigen::VectorXcd::Zero(1 << n);
        if (basis == SpamBasis::Z) {
          effect(idx) = 1.0;
        } else {
          for (int y = 0; y < (1 << n); ++y) {
            const int par = __builtin_popcount(static_cast<unsigned>(idx & y));
            effect(y) = (par % 2 == 0 ? 1.0 : -1.0) * std::pow(2.0, -0.5 * n);
          }
        }
        CHECK(std::abs(probs[idx] - std::norm(effect.dot(out))) < 1e-12);
        total += probs[idx];
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("trivial circuits pin the outcome") {
  const auto p_empty = run_dense({3, {}}, NoiseNone{}, SpamBasis::Z);
  CHECK(p_empty[0] == doctest::Approx(1.0));
  const auto p_flip = run_dense({3, {{GateKind::XFlip, 3, 0.0}}}, NoiseNone{},
                                SpamBasis::Z);
  CHECK(p_flip[1] == doctest::Approx(1.0));
  const auto p_first = run_dense({2, {{GateKind::XFlip, 1, 0.0}}}, NoiseNone{},
                                 SpamBasis::Z);
  CHECK(p_first[2] == doctest::Approx(1.0));
}

TEST_CASE("size limits throw instead of allocating") {
  GateCircuit big{11, {{GateKind::XFlip, 1, 0.0}}};
  CHECK_THROWS_AS(run_dense(big, NoiseNone{}, SpamBasis::Z), BackendError);
  GateCircuit wide{7, {{GateKind::XFlip, 1, 0.0}}};
  CHECK_THROWS_AS(
      run_dense(wide, amplitude_damping_channel(7, 1, 0.1), SpamBasis::Z),
      BackendError);
}

TEST_CASE("shot sampling is deterministic and tracks the distribution") {
  Rng rng(503);
  const GateCircuit circuit = compile(haar_sample(2, rng));
  const auto probs = run_dense(circuit, NoiseNone{}, SpamBasis::Z);

  Rng shots_a(77), shots_b(77);
  const long shots = 20000;
  const auto counts = run_dense_shots(circuit, NoiseNone{}, SpamBasis::Z, shots,
                                      shots_a);
  const auto again = run_dense_shots(circuit, NoiseNone{}, SpamBasis::Z, shots,
                                     shots_b);
  CHECK(counts == again);
  long total = 0;
  for (std::size_t idx = 0; idx < counts.size(); ++idx) {
    total += counts[idx];
    const double freq = static_cast<double>(counts[idx]) / shots;
    const double se = std::sqrt(probs[idx] * (1 - probs[idx]) / shots);
    CHECK(std::abs(freq - probs[idx]) < 5 * se + 1e-3);
  }
  CHECK(total == shots);
}

TEST_CASE("index sampling honors degenerate tables") {
  Rng rng(504);
  const std::vector<double> sure = {0.0, 1.0, 0.0};
  for (int i = 0; i < 10; ++i) CHECK(sample_index(sure, rng) == 1);
}

TEST_CASE("depolarizing channel action matches its closed form") {
  Rng rng(505);
  for (int n : {1, 2}) {
    const double p = 0.23;
    const DenseChannel ch = depolarizing_channel(n, p);
    const Eigen::MatrixXcd rho = random_density(1 << n, rng);
    Eigen::MatrixXcd out = rho;
    apply_channel(out, ch);
    const Eigen::MatrixXcd expected =
        (1 - p) * rho + p * rho.trace() / std::pow(2.0, n) *
                            Eigen::MatrixXcd::Identity(1 << n, 1 << n);
    CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("amplitude damping decays the excited state") {
  const double g = 0.4;
  const DenseChannel ch = amplitude_damping_channel(1, 1, g);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(1, 1) = 1.0;
  apply_channel(rho, ch);
  CHECK(std::abs(rho(0, 0) - g) < 1e-14);
  CHECK(std::abs(rho(1, 1) - (1 - g)) < 1e-14);
}

TEST_CASE("mixture noise events apply the weighted rotation conjugations") {
  Rng rng(506);
  GaussianB mix;
  mix.weights = {0.3, 0.7};
  mix.rotations = {haar_sample(2, rng).matrix(), haar_sample(2, rng).matrix()};

  const Eigen::MatrixXcd rho = random_density(4, rng);
  Eigen::MatrixXcd out = rho;
  apply_noise_event(out, 2, NoiseModel{mix});

  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    const Eigen::MatrixXcd u =
        dense_unitary(compile(OrthogonalElement(mix.rotations[i])));
    expected += mix.weights[i] * u * rho * u.adjoint();
  }
  CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("majorana operator basis is orthonormal and block ordered") {
  const MajoranaBasisDense& basis = majorana_basis(2);
  REQUIRE(basis.size() == 16);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      const std::complex<double> ip =
          (basis.operators[i].adjoint() * basis.operators[j]).trace();
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
  }
  int expected_offset = 0;
  for (int k = 0; k <= 4; ++k) {
    CHECK(basis.block_offset[k] == expected_offset);
    expected_offset += static_cast<int>(binomial(4, k));
  }
  for (int i = 0; i < 16; ++i) CHECK(basis.index_of(basis.masks[i]) == i);
  for (int i = 1; i < 16; ++i) {
    const int pa = __builtin_popcountll(basis.masks[i - 1]);
    const int pb = __builtin_popcountll(basis.masks[i]);
    CHECK((pa < pb || (pa == pb && basis.masks[i - 1] < basis.masks[i])));
  }
}

TEST_CASE("channel superoperators act diagonally for depolarizing noise") {
  const double p = 0.2;
  const SuperoperatorDense s = channel_superop(depolarizing_channel(2, p));
  REQUIRE(s.matrix.rows() == 16);
  CHECK(std::abs(s.matrix(0, 0) - 1.0) < 1e-12);
  for (int i = 1; i < 16; ++i) {
    CHECK(std::abs(s.matrix(i, i) - (1 - p)) < 1e-12);
  }
  Eigen::MatrixXcd off = s.matrix;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() < 1e-12);

  const SuperoperatorDense id =
      channel_superop({2, {Eigen::MatrixXcd::Identity(4, 4)}, NoiseGranularity::PerElement});
  CHECK((id.matrix - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("conjugation superoperators of compiled elements are real orthogonal") {
  Rng rng(507);
  const Eigen::MatrixXcd u = dense_unitary(compile(haar_sample(2, rng)));
  const SuperoperatorDense s = conjugation_superop(u);
  CHECK(s.matrix.imag().cwiseAbs().maxCoeff() < 1e-10);
  CHECK((s.matrix * s.matrix.adjoint() - Eigen::MatrixXcd::Identity(16, 16))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("subspace projectors are a complete orthogonal family") {
  for (int n : {1, 2, 3}) {
    const int dim = static_cast<int>(pow2(2 * n));
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k <= 2 * n; ++k) {
      const SuperoperatorDense p = projector_superop(n, k);
      for (int i = 0; i < dim; ++i) {
        const double d = p.matrix(i, i).real();
        CHECK((d == 0.0 || d == 1.0));
      }
      Eigen::MatrixXcd off = p.matrix;
      off.diagonal().setZero();
      CHECK(off.cwiseAbs().maxCoeff() == 0.0);
      CHECK(std::abs(p.matrix.trace().real() - binomial(2 * n, k)) < 1e-12);
      for (int l = 0; l < k; ++l) {
        CHECK((projector_superop(n, l).matrix * p.matrix).cwiseAbs().maxCoeff() ==
              0.0);
      }
      sum += p.matrix;
    }
    CHECK((sum - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("projectors commute with compiled conjugations") {
  Rng rng(508);
  for (int n : {2, 3}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXcd u = dense_unitary(compile(haar_sample(n, rng)));
      const SuperoperatorDense s = conjugation_superop(u);
      for (int k = 0; k <= 2 * n; ++k) {
        const SuperoperatorDense p = projector_superop(n, k);
        CHECK((p.matrix * s.matrix - s.matrix * p.matrix).cwiseAbs().maxCoeff() <
              1e-9);
      }
    }
  }
}

TEST_CASE("random conjugations average any channel to block scalars") {
  const int n = 2;
  const int dim = 16;
  const int samples = 4000;
  const SuperoperatorDense target =
      channel_superop(amplitude_damping_channel(n, 1, 0.3));

  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(dim, dim);
  Rng rng(509);
  for (int s = 0; s < samples; ++s) {
    const Eigen::MatrixXcd u = dense_unitary(compile(haar_sample(n, rng)));
    const Eigen::MatrixXd w = conjugation_superop(u).matrix.real();
    const Eigen::MatrixXd twirled = w.transpose() * target.matrix.real() * w;
    const Eigen::MatrixXd delta = twirled - mean;
    mean += delta / (s + 1);
    m2 += delta.cwiseProduct(twirled - mean);
  }

  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k <= 2 * n; ++k) {
    const Eigen::MatrixXd p = projector_superop(n, k).matrix.real();
    const double scalar = (p * target.matrix.real()).trace() /
                          static_cast<double>(binomial(2 * n, k));
    expected += scalar * p;
  }

  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double se = std::sqrt(m2(i, j) / (samples - 1.0) / samples);
      CHECK(std::abs(mean(i, j) - expected(i, j)) < 3 * se + 1e-10);
    }
  }
}

TEST_CASE("exact decay rates per subspace") {
  for (int k = 0; k <= 4; ++k) {
    CHECK(lambda_exact(NoiseModel{NoiseNone{}}, 2, k) == 1.0);
  }

  const double p = 0.1;
  const NoiseModel dep{depolarizing_channel(2, p)};
  CHECK(lambda_exact(dep, 2, 0) == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 1; k <= 4; ++k) {
    CHECK(lambda_exact(dep, 2, k) == doctest::Approx(1 - p).epsilon(1e-12));
  }

  const double g = 0.36;
  const NoiseModel damp{amplitude_damping_channel(1, 1, g)};
  CHECK(lambda_exact(damp, 1, 1) == doctest::Approx(std::sqrt(1 - g)).epsilon(1e-12));
  CHECK(lambda_exact(damp, 1, 2) == doctest::Approx(1 - g).epsilon(1e-12));

  const double b = 0.7;
  const NoiseModel iso{gaussian_sign_mixture(Eigen::MatrixXd::Identity(4, 4),
                                             {b, b, b, b})};
  for (int k = 0; k <= 4; ++k) {
    CHECK(lambda_exact(iso, 2, k) ==
          doctest::Approx(std::pow(b, k)).epsilon(1e-10));
  }

  CHECK_THROWS_AS(
      lambda_exact(NoiseModel{GateDependent{depolarizing_channel(2, 0.1), 0.1}}, 2, 1),
      BackendError);
}

TEST_CASE("mixture decay rates match the dense superoperator block traces") {
  Rng rng(510);
  for (int n : {2, 3}) {
    GaussianB mix;
    mix.weights = {0.25, 0.45, 0.3};
    for (int i = 0; i < 3; ++i) {
      mix.rotations.push_back(haar_sample(n, rng).matrix());
    }
    Eigen::MatrixXcd averaged =
        Eigen::MatrixXcd::Zero(pow2(2 * n), pow2(2 * n));
    for (int i = 0; i < 3; ++i) {
      const Eigen::MatrixXcd u =
          dense_unitary(compile(OrthogonalElement(mix.rotations[i])));
      averaged += mix.weights[i] * conjugation_superop(u).matrix;
    }
    for (int k = 0; k <= 2 * n; ++k) {
      const double block_trace =
          (projector_superop(n, k).matrix * averaged).trace().real();
      const double expected = block_trace / static_cast<double>(binomial(2 * n, k));
      CHECK(lambda_exact(NoiseModel{mix}, n, k) ==
            doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("average gate fidelity") {
  const DenseChannel identity{
      2, {Eigen::MatrixXcd::Identity(4, 4)}, NoiseGranularity::PerElement};
  CHECK(favg_exact(identity) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(favg_exact(depolarizing_channel(2, 0.1)) ==
        doctest::Approx(0.925).epsilon(1e-12));

  for (int n : {2, 3}) {
    const DenseChannel damp = amplitude_damping_channel(n, n > 1 ? 2 : 1, 0.3);
    double lambda_sum = 0.0;
    for (int k = 0; k <= 2 * n; ++k) {
      lambda_sum += static_cast<double>(binomial(2 * n, k)) *
                    lambda_exact(NoiseModel{damp}, n, k);
    }
    const double expected =
        (std::pow(2.0, -n) * lambda_sum + 1.0) / (std::pow(2.0, n) + 1.0);
    CHECK(favg_exact(damp) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("elementary symmetric polynomials") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d.diagonal() << 1.0, 2.0, 3.0;
  const std::vector<double> e = elementary_symmetric(d);
  REQUIRE(e.size() == 4);
  CHECK(e[0] == doctest::Approx(1.0));
  CHECK(e[1] == doctest::Approx(6.0));
  CHECK(e[2] == doctest::Approx(11.0));
  CHECK(e[3] == doctest::Approx(6.0));

  Rng rng(511);
  Eigen::MatrixXd sym(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j <= i; ++j) {
      sym(i, j) = sym(j, i) = rng.normal();
    }
  }
  const Eigen::VectorXd eig =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues();
  const std::vector<double> es = elementary_symmetric(sym);
  CHECK(es[1] == doctest::Approx(eig.sum()).epsilon(1e-10));
  CHECK(es[4] == doctest::Approx(eig.prod()).epsilon(1e-8));
  const double e2 = 0.5 * (eig.sum() * eig.sum() - eig.squaredNorm());
  CHECK(es[2] == doctest::Approx(e2).epsilon(1e-9));
}

}  // TEST_SUITE
