#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "doctest.h"
#include "mgbench/compiler.hpp"
#include "mgbench/dense_sim.hpp"
#include "mgbench/errors.hpp"
#include "mgbench/rng.hpp"
#include "oracles.hpp"

using namespace mgbench;

namespace {

OrthogonalElement haar_with_parity(int n, int parity, Rng& rng) {
  Eigen::MatrixXd m = haar_sample(n, rng).matrix();
  if ((m.determinant() > 0 ? 1 : -1) != parity) m.col(2 * n - 1) *= -1.0;
  return OrthogonalElement(m);
}

bool equal_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                       double tol) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  const std::complex<double> phase = a(r, c) / b(r, c);
  if (std::abs(std::abs(phase) - 1.0) > tol) return false;
  return (a - phase * b).cwiseAbs().maxCoeff() < tol;
}

}  // namespace

TEST_SUITE("compiler") {

TEST_CASE("circuit validation") {
  CHECK_THROWS_AS(validate_circuit({2, {{GateKind::ZRot, 0, 0.1}}}), ConfigError);
  CHECK_THROWS_AS(validate_circuit({2, {{GateKind::ZRot, 3, 0.1}}}), ConfigError);
  CHECK_THROWS_AS(validate_circuit({2, {{GateKind::XXRot, 2, 0.1}}}), ConfigError);
  CHECK_THROWS_AS(validate_circuit({2, {{GateKind::XYRot, 2, 0.1}}}), ConfigError);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate_circuit({2, {{GateKind::ZRot, 1, inf}}}), ConfigError);
  CHECK_NOTHROW(validate_circuit({2, {{GateKind::XXRot, 1, 0.1}}}));
  CHECK_NOTHROW(validate_circuit({1, {{GateKind::XFlip, 1, 0.0}}}));
}

TEST_CASE("gate counting") {
  GateCircuit c{3,
                {{GateKind::ZRot, 1, 0.1},
                 {GateKind::XXRot, 1, 0.2},
                 {GateKind::XYRot, 2, 0.3},
                 {GateKind::XFlip, 3, 0.0},
                 {GateKind::XXRot, 2, 0.4}}};
  const GateCounts counts = gate_count(c);
  CHECK(counts.zrots == 1);
  CHECK(counts.xxrots == 2);
  CHECK(counts.xyrots == 1);
  CHECK(counts.xflips == 1);
  CHECK(counts.two_qubit() == 3);
}

TEST_CASE("identity compiles to nothing and a reflection to one flip") {
  const GateCircuit empty = compile(OrthogonalElement::identity(6));
  CHECK(empty.gates.empty());

  Eigen::MatrixXd reflect = Eigen::MatrixXd::Identity(6, 6);
  reflect(5, 5) = -1.0;
  const GateCircuit flip = compile(OrthogonalElement(reflect));
  REQUIRE(flip.gates.size() == 1);
  CHECK(flip.gates[0].kind == GateKind::XFlip);
  CHECK(flip.gates[0].qubit == 3);
}

TEST_CASE("single-gate induced rotations") {
  const int n = 3;
  const double t = 0.37;
  CHECK((induced_rotation({n, {{GateKind::ZRot, 2, t}}}).matrix() -
         plane_rotation(2 * n, 3, 4, 2 * t))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  CHECK((induced_rotation({n, {{GateKind::XXRot, 1, t}}}).matrix() -
         plane_rotation(2 * n, 2, 3, 2 * t))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  const Eigen::MatrixXd flip2 =
      induced_rotation({n, {{GateKind::XFlip, 2, 0.0}}}).matrix();
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(2 * n);
  diag(3) = diag(4) = diag(5) = -1.0;  // modes 4..6 negate
  CHECK((flip2 - Eigen::MatrixXd(diag.asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("compilation round-trips through the induced rotation") {
  Rng rng(301);
  for (int n = 1; n <= 5; ++n) {
    for (int parity : {1, -1}) {
      for (int trial = 0; trial < 50; ++trial) {
        const OrthogonalElement q = haar_with_parity(n, parity, rng);
        for (bool use_xy : {false, true}) {
          const GateCircuit circuit = compile(q, use_xy);
          const OrthogonalElement back = induced_rotation(circuit);
          CHECK((back.matrix() - q.matrix()).cwiseAbs().maxCoeff() < 1e-9);
          CHECK(back.parity() == parity);
        }
      }
    }
  }
}

TEST_CASE("compiled unitaries conjugate majorana operators by the rotation") {
  Rng rng(302);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const OrthogonalElement q = haar_sample(n, rng);
      const Eigen::MatrixXcd u = dense_unitary(compile(q));
      for (int j = 1; j <= 2 * n; ++j) {
        const Eigen::MatrixXcd lhs =
            u * oracles::dense_gamma(n, j) * u.adjoint();
        Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(1 << n, 1 << n);
        for (int kk = 1; kk <= 2 * n; ++kk) {
          rhs += q.matrix()(kk - 1, j - 1) * oracles::dense_gamma(n, kk);
        }
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}

TEST_CASE("flip-conjugated half-angle pairs reproduce the coupled rotation") {
  for (double t : {0.1, -0.4, 1.3, 2.9, -2.2}) {
    const GateCircuit direct{2, {{GateKind::XXRot, 1, t}}};
    const GateCircuit expanded{2,
                               {{GateKind::XFlip, 1, 0.0},
                                {GateKind::XYRot, 1, t / 2},
                                {GateKind::XFlip, 1, 0.0},
                                {GateKind::XYRot, 1, t / 2}}};
    CHECK(equal_up_to_phase(dense_unitary(expanded), dense_unitary(direct), 1e-10));
  }
}

TEST_CASE("the two native gate sets compile to the same unitary up to phase") {
  Rng rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const OrthogonalElement q = haar_sample(2, rng);
    const Eigen::MatrixXcd a = dense_unitary(compile(q, false));
    const Eigen::MatrixXcd b = dense_unitary(compile(q, true));
    CHECK(equal_up_to_phase(b, a, 1e-10));
  }
}

TEST_CASE("parity matches the reflection count and the determinant") {
  Rng rng(304);
  for (int trial = 0; trial < 20; ++trial) {
    const OrthogonalElement q = haar_with_parity(2, trial % 2 == 0 ? 1 : -1, rng);
    const GateCircuit circuit = compile(q);
    const int flips = gate_count(circuit).xflips;
    CHECK((flips % 2 == 0 ? 1 : -1) == q.parity());
    CHECK(induced_rotation(circuit).matrix().determinant() ==
          doctest::Approx(q.parity()).epsilon(1e-10));
    if (q.parity() == -1) {
      CHECK(circuit.gates.back().kind == GateKind::XFlip);
      CHECK(circuit.gates.back().qubit == 2);
    }
  }
}

TEST_CASE("generic elements compile to the staircase gate budget") {
  Rng rng(305);
  const OrthogonalElement q = haar_with_parity(2, 1, rng);
  const GateCircuit xx = compile(q, false);
  const GateCounts cxx = gate_count(xx);
  CHECK(cxx.zrots + cxx.xxrots == 6);  // n(2n-1) staircase rotations
  CHECK(cxx.xxrots == 2);
  CHECK(cxx.xyrots == 0);
  CHECK(cxx.xflips == 0);

  const GateCircuit xy = compile(q, true);
  const GateCounts cxy = gate_count(xy);
  CHECK(cxy.xxrots == 0);
  CHECK(cxy.xyrots == 4);  // two half-angle rotations per coupled plane
  CHECK(cxy.xflips == 4);
  CHECK(cxy.two_qubit() == 4);
}

}  // TEST_SUITE
