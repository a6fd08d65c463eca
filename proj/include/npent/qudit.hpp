#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "npent/canon.hpp"
#include "npent/poly.hpp"
#include "npent/state.hpp"

namespace npent {

// Cartan-Weyl split of su(d) in the level basis |0>..|d-1> (|0> is the
// reference level): d-1 diagonal traceless Cartan generators, the full
// level-raising set, and the commuting nilpotent subset nu^k = |k><0|.
// The lowering set consists of the adjoints and annihilates |0>.
struct CartanWeyl {
  uint32_t d = 2;
  std::vector<Eigen::MatrixXcd> cartan;
  std::vector<Eigen::MatrixXcd> raising;  // |b><a| for all a < b
  std::vector<Eigen::MatrixXcd> nu;       // |k><0| for k = 1..d-1
};
CartanWeyl cartan_weyl(uint32_t d);

// Unitary canonic form for an assembly with arbitrary per-element
// dimensions.  Stage k maximizes the population of the basis state with
// every element at level min(k, d_i - 1) over the residual product group
// acting on levels >= k, by alternating per-element closed-form updates;
// at a fixed point every amplitude reachable from the stage target by a
// single local substitution vanishes.  Phases are then fixed so that, for
// each element and each level, one designated coefficient (the element at
// that level with all others at their top level) is real positive, which
// reduces to the qubit convention when all d_i = 2.  The recorded
// transform list stays empty for elements with d_i > 2 (the op record
// carries 2x2 factors only).
Tanglemeter qudit_su_canonicalize(const StateVector& s,
                                  const CanonOptions& opt = {});

// Membership test for the scale-fixed three-qutrit determinant-1 canonic
// form: support restricted to the two symmetric bilinear triples with a
// shared coefficient each plus the two unit cubic terms.  Outputs the two
// shared coefficients when requested.
bool sl_qutrit_form(const NilPoly& f, double tol = 1e-8,
                    cplx* beta_g = nullptr, cplx* beta_u = nullptr);

// Embedded subalgebra generating the restricted local group of one
// element: raise_op is the nilpotent ladder used as the formal variable
// (order = smallest power that vanishes), spin_plus the weighted ladder
// satisfying the su(2) relations, weight_op the diagonal label operator.
struct RestrictedAlgebra {
  uint32_t d = 3;
  Eigen::MatrixXcd raise_op;
  Eigen::MatrixXcd spin_plus;
  Eigen::MatrixXcd weight_op;
  uint32_t order = 3;
};
// Spin-1 inside a qutrit: raise_op^2 is the two-level jump and
// raise_op^3 = 0, so generating functions carry per-variable degree 2.
RestrictedAlgebra spin1_algebra();

// F({x_i}) = <O| exp[sum_i x_i raise_op_i^dagger] |Psi> with the input
// scaled to unit reference amplitude; returns a degree-capped polynomial
// with caps order-1.  Coefficient of prod x_i^{k_i} equals the level-k
// amplitude divided by prod k_i!.
NilPoly generating_function(const StateVector& s, const RestrictedAlgebra& alg);

// Canonic form under the restricted per-element rotation group (true
// spin-1 rotations): maximize the reference population by alternating
// per-element two-angle searches, then make the per-element quadratic
// coefficients real nonnegative with label-phase rotations.  The returned
// poly is the logarithm of the canonic generating function.
Tanglemeter spin1_canonicalize(const StateVector& s,
                               const CanonOptions& opt = {});

}  // namespace npent
