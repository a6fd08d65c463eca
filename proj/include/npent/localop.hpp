#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>

#include "npent/poly.hpp"
#include "npent/state.hpp"

namespace npent {

// Triple (A, B, C) of the exp(A s-) exp(B sz) exp(C s+) factorization of an
// invertible 2x2 map.
struct AbcTriple {
  cplx A, B, C;
};

// One element's local transformation (qubit case carries the factorization).
struct LocalOp {
  uint32_t element = 0;
  Eigen::Matrix2cd matrix = Eigen::Matrix2cd::Identity();
  std::optional<AbcTriple> abc;
};

// Two-qubit partial-swap gate exp[i t (si+ sj- + si- sj+)].
struct GateOp {
  uint32_t i = 0, j = 1;
  double t = 0.0;
};

// Pauli matrices in the |0>-first ordering with sz|0> = -|0>,
// s+ = [[0,0],[1,0]].
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();
Eigen::Matrix2cd sigma_plus();
Eigen::Matrix2cd sigma_minus();

// exp[i (sx Px + sy Py + sz Pz)]; complex components allowed.
Eigen::Matrix2cd su2_matrix(const std::array<cplx, 3>& P);

// Factorization chart.  Throws SINGULAR_FACTORIZATION when the lower-right
// entry of the matrix vanishes (chart does not cover that submanifold).
AbcTriple matrix_to_abc(const Eigen::Matrix2cd& u);
AbcTriple su2_to_abc(const std::array<cplx, 3>& P);
Eigen::Matrix2cd abc_matrix(const AbcTriple& t);

LocalOp make_local_op(uint32_t element, const Eigen::Matrix2cd& m);
LocalOp make_local_op(uint32_t element, const std::array<cplx, 3>& P);

// Dense matrix of the gate on the full assembly ordering.
Eigen::Matrix4cd gate_matrix(double t);

// Polynomial-side transformation of F under a factorized local op:
// scale by e^-B, multiply by (1 + C s_i), substitute s_i -> e^{2B}(A + s_i).
// The constant term carries the vacuum-amplitude factor.
NilPoly apply_local_to_poly(const NilPoly& F, const LocalOp& op);

// Polynomial-side gate action: rotates the s_i-only and s_j-only sectors.
NilPoly apply_gate(const NilPoly& F, const GateOp& gate);

// Matrix-side application of a gate to a state vector.
StateVector apply_gate_state(const StateVector& s, const GateOp& gate);

// Closed-form transformation of the nilpotential under a single-qubit
// rotation with Pz = 0, Px = P cos(phi), Py = P sin(phi).  The constant
// term of the result is dropped.
NilPoly transform_nilpotential(const NilPoly& f, uint32_t elem, double P,
                               double phi);

// Closed-form transformation of the nilpotential under the gate.
NilPoly transform_nilpotential(const NilPoly& f, const GateOp& gate);

}  // namespace npent
