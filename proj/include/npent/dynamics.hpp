#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "npent/poly.hpp"
#include "npent/state.hpp"

namespace npent {

// Hamiltonian families: purely local drives; the XY exchange model
// (local transverse drives plus symmetric flip-flop couplings), which is
// universal for control; and the spherical-tensor diagonal form with
// flip-flop, zz and double-flip couplings.
enum class HamiltonianFamily { Local, XYUniversal, Spherical };

struct HamiltonianSpec {
  HamiltonianFamily family = HamiltonianFamily::Local;
  uint32_t n = 0;
  // Per-element (Px, Py, Pz) drive at time t; complex values drive
  // non-unitary (sl) flows.
  std::function<std::array<cplx, 3>(uint32_t, double)> local;
  // Symmetric couplings, zero diagonal.  XYUniversal uses g_pm only.
  Eigen::MatrixXd g_pm, g_zz, g_pp;
};

HamiltonianSpec make_local_hamiltonian(
    uint32_t n, std::function<std::array<cplx, 3>(uint32_t, double)> local);
HamiltonianSpec make_xy_hamiltonian(
    uint32_t n, std::function<std::array<cplx, 3>(uint32_t, double)> local,
    Eigen::MatrixXd g);

// One product term of the Hamiltonian: coeff * product of single-element
// operators, each tagged 'p' (raising), 'm' (lowering) or 'z'.
struct HamTerm {
  cplx coeff;
  std::vector<std::pair<uint32_t, char>> factors;
};

std::vector<HamTerm> hamiltonian_terms(const HamiltonianSpec& H, double t);

// Operator action on a qubit polynomial: raising multiplies by the
// generator, lowering differentiates, z acts as -1 + 2 s ds.
NilPoly apply_operator_terms(const std::vector<HamTerm>& terms,
                             const NilPoly& F);
StateVector apply_operator_terms(const std::vector<HamTerm>& terms,
                                 const StateVector& s);

// Right-hand side of i df/dt.  Local and XY families use their closed
// forms; Spherical uses the general exp(-f) H exp(f) path.
NilPoly rhs_nilpotential(const NilPoly& f, const HamiltonianSpec& H, double t);
// The general path for any family (used to cross-check the closed forms).
NilPoly rhs_general(const NilPoly& f, const HamiltonianSpec& H, double t);

struct IntegratorCfg {
  double dt = 1e-3;
  uint32_t checkpoint_stride = 100;
};

using PolyTrajectory = std::vector<std::pair<double, NilPoly>>;
using StateTrajectory = std::vector<std::pair<double, StateVector>>;

// Fixed-step classical 4th-order integration of the nilpotential; the
// constant term is dropped at every stage.  Aborts with VACUUM_ZERO when
// the reconstructed vacuum fraction falls below 1e-6.
PolyTrajectory evolve_nilpotential(const NilPoly& f0, const HamiltonianSpec& H,
                                   double T, const IntegratorCfg& cfg);

// Reference integrator for the state vector (same stepper).
StateTrajectory evolve_state(const StateVector& s0, const HamiltonianSpec& H,
                             double T, const IntegratorCfg& cfg);

// CSV export: time column plus re/im coefficient columns labelled by the
// decimal shorthand of each multi-index.
std::string trajectory_to_csv(const PolyTrajectory& traj);

}  // namespace npent
