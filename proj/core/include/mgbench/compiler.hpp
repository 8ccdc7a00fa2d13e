#pragma once

#include <vector>

#include "mgbench/skew.hpp"

namespace mgbench {

// Native gate set.  Angles are radians.  ZRot(j, t) = exp(i t Z_j);
// XXRot(j, t) = exp(i t X_j X_{j+1}); XYRot(j, t) = exp(i t (X_j X_{j+1} +
// Y_j Y_{j+1})); XFlip(j) = X_j.  Two-qubit kinds act on the adjacent pair
// (j, j+1); `qubit` is always the first qubit of the pair.
enum class GateKind { ZRot, XXRot, XYRot, XFlip };

struct Gate {
  GateKind kind = GateKind::ZRot;
  int qubit = 1;
  double angle = 0.0;
};

// Gates are applied left to right: gates.front() acts on the state first.
struct GateCircuit {
  int n = 0;
  std::vector<Gate> gates;
};

// Throws ConfigError on out-of-range qubits, non-adjacent pairs, or
// non-finite angles.
void validate_circuit(const GateCircuit& circuit);

struct GateCounts {
  int zrots = 0;
  int xxrots = 0;
  int xyrots = 0;
  int xflips = 0;

  int two_qubit() const { return xxrots + xyrots; }
};

GateCounts gate_count(const GateCircuit& circuit);

// Translates Q into a staircase of ZRot/XXRot gates (planes (2j-1,2j) become
// ZRot on qubit j, planes (2j,2j+1) become XXRot on (j,j+1)); zero-angle
// rotations are dropped, and parity -1 appends an XFlip on qubit n.  With
// use_xy set each XXRot(j, t) is replaced by the equivalent four-gate
// sequence XFlip(j), XYRot(j, t/2), XFlip(j), XYRot(j, t/2).
GateCircuit compile(const OrthogonalElement& q, bool use_xy = false);

// Orthogonal matrix induced by conjugation, U gamma_j U^dag =
// sum_k Q_{kj} gamma_k, accumulated gate-by-gate through closed-form row
// updates on a 2n x 2n matrix.
OrthogonalElement induced_rotation(const GateCircuit& circuit);

}  // namespace mgbench
