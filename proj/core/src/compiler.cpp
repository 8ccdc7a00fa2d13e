#include "mgbench/compiler.hpp"

#include <cmath>
#include <string>

#include "mgbench/errors.hpp"

namespace mgbench {

namespace {

const char* kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::ZRot:
      return "ZRot";
    case GateKind::XXRot:
      return "XXRot";
    case GateKind::XYRot:
      return "XYRot";
    case GateKind::XFlip:
      return "XFlip";
  }
  return "?";
}

// Left-multiplies by the plane rotation G with G_aa = G_bb = cos t,
// G_ab = sin t, G_ba = -sin t (0-based rows a, b).
void rotate_rows(Eigen::MatrixXd& m, int a, int b, double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  const Eigen::RowVectorXd ra = m.row(a);
  const Eigen::RowVectorXd rb = m.row(b);
  m.row(a) = c * ra + s * rb;
  m.row(b) = -s * ra + c * rb;
}

}  // namespace

void validate_circuit(const GateCircuit& circuit) {
  if (circuit.n < 1) {
    throw ConfigError("circuit qubit count must be positive, got " +
                      std::to_string(circuit.n));
  }
  for (const Gate& g : circuit.gates) {
    const bool two_qubit =
        g.kind == GateKind::XXRot || g.kind == GateKind::XYRot;
    const int max_qubit = two_qubit ? circuit.n - 1 : circuit.n;
    if (g.qubit < 1 || g.qubit > max_qubit) {
      throw ConfigError(std::string(kind_name(g.kind)) + " qubit " +
                        std::to_string(g.qubit) + " out of range [1, " +
                        std::to_string(max_qubit) + "] at n = " +
                        std::to_string(circuit.n));
    }
    if (g.kind != GateKind::XFlip && !std::isfinite(g.angle)) {
      throw ConfigError(std::string(kind_name(g.kind)) +
                        " angle must be finite");
    }
  }
}

GateCounts gate_count(const GateCircuit& circuit) {
  validate_circuit(circuit);
  GateCounts counts;
  for (const Gate& g : circuit.gates) {
    switch (g.kind) {
      case GateKind::ZRot:
        ++counts.zrots;
        break;
      case GateKind::XXRot:
        ++counts.xxrots;
        break;
      case GateKind::XYRot:
        ++counts.xyrots;
        break;
      case GateKind::XFlip:
        ++counts.xflips;
        break;
    }
  }
  return counts;
}

GateCircuit compile(const OrthogonalElement& q, bool use_xy) {
  if (q.dim() % 2 != 0) {
    throw ConfigError("compile requires even dimension, got " +
                      std::to_string(q.dim()));
  }
  const int n = q.dim() / 2;
  const GivensFactorization fact = givens_decompose(q);

  GateCircuit circuit;
  circuit.n = n;
  // fact.rotations is in left-to-right matrix product order; the rightmost
  // factor acts on the state first, so the circuit lists it in reverse.
  for (auto it = fact.rotations.rbegin(); it != fact.rotations.rend(); ++it) {
    const auto& [plane, angle] = *it;
    if (angle == 0.0) continue;
    const double half = 0.5 * angle;
    if (plane % 2 == 1) {
      circuit.gates.push_back({GateKind::ZRot, (plane + 1) / 2, half});
    } else if (!use_xy) {
      circuit.gates.push_back({GateKind::XXRot, plane / 2, half});
    } else {
      const int qubit = plane / 2;
      circuit.gates.push_back({GateKind::XFlip, qubit, 0.0});
      circuit.gates.push_back({GateKind::XYRot, qubit, 0.5 * half});
      circuit.gates.push_back({GateKind::XFlip, qubit, 0.0});
      circuit.gates.push_back({GateKind::XYRot, qubit, 0.5 * half});
    }
  }
  if (fact.parity < 0) {
    circuit.gates.push_back({GateKind::XFlip, n, 0.0});
  }
  return circuit;
}

OrthogonalElement induced_rotation(const GateCircuit& circuit) {
  validate_circuit(circuit);
  const int dim = 2 * circuit.n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim);
  for (const Gate& g : circuit.gates) {
    const int j = g.qubit;
    switch (g.kind) {
      case GateKind::ZRot:
        rotate_rows(m, 2 * j - 2, 2 * j - 1, 2.0 * g.angle);
        break;
      case GateKind::XXRot:
        rotate_rows(m, 2 * j - 1, 2 * j, 2.0 * g.angle);
        break;
      case GateKind::XYRot:
        rotate_rows(m, 2 * j - 1, 2 * j, 2.0 * g.angle);
        rotate_rows(m, 2 * j - 2, 2 * j + 1, -2.0 * g.angle);
        break;
      case GateKind::XFlip:
        m.bottomRows(dim - (2 * j - 1)) *= -1.0;
        break;
    }
  }
  return OrthogonalElement(m);
}

}  // namespace mgbench
