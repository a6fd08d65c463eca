#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "npent/localop.hpp"
#include "npent/poly.hpp"
#include "npent/state.hpp"

namespace npent {

enum class CanonGroup { SU, SL };

// Canonic nilpotential together with the data needed to reproduce the
// input: the canonic state is kappa * exp_nil(poly) applied to the vacuum,
// and the recorded per-element ops map the input state onto it.
struct Tanglemeter {
  NilPoly poly;
  CanonGroup group = CanonGroup::SU;
  std::vector<LocalOp> transform;
  cplx vacuum_factor{1.0, 0.0};
  uint32_t iterations = 0;
  double residual = 0.0;
};

// Orbit-class identifier with its free parameters and, for four qubits,
// the number of vanishing eigenvalues of the cubic-elimination system.
struct ClassLabel {
  std::string name;
  std::vector<cplx> params;
  int gamma_zero_count = 0;
  NilPoly canonic_form;  // witnessing form (empty when not applicable)
};

struct CanonOptions {
  double tol = 1e-10;        // convergence threshold on driven coefficients
  uint32_t max_iter = 10000;
  double dt = 0.1;           // flow step
  double newton_threshold = 1e-3;
  double det_tol = 1e-8;     // singularity threshold
  double class_tol = 1e-6;   // classification threshold
  // Number of screened random restarts of the unitary flow; the flow is a
  // local ascent of the vacuum population, so restarts let it escape
  // suboptimal basins on strongly entangled states.  0 keeps the plain
  // single-start ascent from the input.
  uint32_t restarts = 6;
};

// Drive all linear coefficients of the nilpotential to zero with unitary
// per-element rotations chosen by feedback, maximizing the vacuum
// population, then fix the phase convention (coefficients of the n
// monomials of order n-1 real positive, with a deterministic fallback for
// degenerate states).
Tanglemeter su_canonicalize(const StateVector& s, const CanonOptions& opt = {});

// Continue from the unitary canonic form with non-unitary determinant-1
// per-element maps: eliminate the order-(n-1) monomials, then scale to the
// conventional form (highest coefficient 1, paired bilinears equal).  On
// the singular manifolds where the elimination system degenerates, the
// reachable part is eliminated and the class label reports the matched
// singular form instead.
std::pair<Tanglemeter, ClassLabel> sl_canonicalize(const StateVector& s,
                                                   const CanonOptions& opt = {});

// Closed-form eigenvalues of the 4-qubit cubic-elimination matrix, with
// square-root branches fixed by matching the numerically computed spectrum.
std::array<cplx, 4> gamma_eigenvalues(const NilPoly& f_c);

// The 4x4 cubic-elimination matrix itself (for determinant checks).
Eigen::Matrix4cd elimination_matrix(const NilPoly& f_c);

// Three-qubit orbit classification from the unitary tanglemeter support
// and the 3-tangle.
ClassLabel classify3(const StateVector& s, const CanonOptions& opt = {});

// Dimension of the set of local algebra directions annihilating the state.
uint32_t stabilizer_dimension(const StateVector& s, double tol = 1e-8);

// Number of independent real local invariants: codimension of the orbit
// of local (unitary or determinant-1) maps together with global rescaling.
uint32_t orbit_coset_dimension(const StateVector& s, CanonGroup group,
                               double tol = 1e-8);

}  // namespace npent
