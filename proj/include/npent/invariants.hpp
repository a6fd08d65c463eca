#pragma once

#include <array>
#include <string>
#include <vector>

#include "npent/canon.hpp"
#include "npent/localop.hpp"
#include "npent/poly.hpp"
#include "npent/state.hpp"

namespace npent {

// Determinant invariant of a two-qubit pure state.
cplx invariants2(const StateVector& s);

// The five independent local-unitary invariants of a three-qubit pure
// state: purities of the three single-qubit reduced densities (i1 traces
// out all but the last element, i3 all but the first) and the real and
// imaginary parts of the holomorphic quartic contraction.
struct Invariants3 {
  double i1 = 0.0, i2 = 0.0, i3 = 0.0;
  double i4 = 0.0, i5 = 0.0;
};
Invariants3 invariants3(const StateVector& s);

// Pairwise concurrence between elements a and b of a three-qubit state:
// 2 | |beta_ab| - |beta_ac beta_cb| | over the normalization factor of the
// unitary canonic form.  Arbitrary input is canonicalized first.
double concurrence(const StateVector& s, uint32_t a, uint32_t b,
                   const CanonOptions& opt = {});

// Residual tripartite entanglement 4 |beta7^2 + 4 beta3 beta5 beta6| over
// the squared normalization factor of the unitary canonic form.
double three_tangle(const StateVector& s, const CanonOptions& opt = {});

// Determinant-1-invariant contractions of a four-qubit state.  i2 is the
// quadratic invariant; the quartic trio is labeled by the bipartition that
// stays uncontracted between holomorphic and raised factors ({12|34},
// {13|24}, {14|23}); the sextic trio uses the same bipartition labels
// (i6_23 pairs with i4_14, its complement).  Normalization is fixed so
// that the closed forms on the scaled canonic form hold:
//   i2     = psi0000^2 (t + x + y + z)
//   i6_12  = 4 psi0000^6 (t + x - y - z)(t x - y z)
//   i6_23  = 4 psi0000^6 (t - x + y - z)(t y - x z)
//   i6_13  = 4 psi0000^6 (t - x - y + z)(t z - x y)
// with x, y, z the squared paired bilinear coefficients and
// t = 1 + x + y + z, and so that i4_12 + i4_13 + i4_14 = (3/2) i2^2.
struct Invariants4 {
  cplx i2;
  cplx i4_12, i4_13, i4_14;
  cplx i6_12, i6_23, i6_13;
};
Invariants4 invariants4(const StateVector& s);

// One branch of the inverse map from the quadratic/sextic invariants to
// the paired bilinear coefficients of the scaled canonic form.  beta3
// carries the {12|34} pairing (monomial masks 3 and 12), beta5 the
// {14|23} pairing (masks 9 and 6), beta6 the {13|24} pairing (masks 5
// and 10).  nonunitarity = |ln sum |psi|^2| over the reconstructed
// amplitudes; sl_measure = |beta3|^2 + |beta5|^2 + |beta6|^2.
struct ReconCandidate {
  cplx P;
  cplx beta3, beta5, beta6;
  double nonunitarity = 0.0;
  double sl_measure = 0.0;
};

// All branches (cubic roots x sign assignments) together with the branch
// minimizing the nonunitarity (ties by smallest |P|) and the branch
// minimizing the sl measure.
struct Reconstruction4 {
  ReconCandidate best;      // minimal nonunitarity
  ReconCandidate best_sl;   // minimal sl measure
  std::vector<ReconCandidate> candidates;
};
Reconstruction4 reconstruct4(const Invariants4& inv, double tol = 1e-8);

// Scalar entanglement measures of a probability-normalized four-qubit
// state: the reconstruction-based pair and the directly polynomial pair.
struct Measures4 {
  double nonunitarity = 0.0;
  double sl_measure = 0.0;
  double poly_su = 0.0;
  double poly_sl = 0.0;
};
Measures4 measures4(const StateVector& s, double tol = 1e-8);

// CSV sample of the measures over random four-qubit states, one row per
// seed: seed, poly_su, nonunitarity, poly_sl, sl_measure.
std::string measures4_csv(uint32_t samples, uint64_t seed0);

// Scale-free cross ratio of a three-qubit unitary-canonic state together
// with the roots z of -(1+2z)^2 / (z(1+z)) = zeta and explicit per-qubit
// determinant-free triples (A_i, B_i, C_i) mapping the maximally
// entangled state onto the input.  The triples reproduce the input
// exactly when it carries the scale of a dressed maximally entangled
// state (1 + 2z = 2 psi000 psi111 at one of the roots); otherwise they
// realize the nearest such representative.  Throws NOT_IN_GENERIC_ORBIT
// when
// zeta is at the excluded value -4 (reached only in the |z| -> infinity
// limit) and requires nonzero bilinear amplitudes.
struct ZetaFilter {
  cplx zeta;
  std::array<cplx, 2> z_roots;
  cplx z;                        // the root used for the filter
  std::array<AbcTriple, 3> ops;  // per element, in element order
};
ZetaFilter zeta_filter(const StateVector& s, double tol = 1e-6);

// Partial-transpose spectrum of the two-qubit reduced density of the two
// highest elements of a four-qubit canonic state with purely bilinear
// (paired) or purely trilinear support, checked against the closed-form
// pair sums and products.
struct PeresReport {
  std::string form;               // "bilinear" or "trilinear"
  std::array<double, 4> kappa;    // ascending numeric eigenvalues
  std::array<double, 4> predicted;// ascending closed-form eigenvalues
  double residual = 0.0;
  bool negative = false;
};
PeresReport peres_relations(const StateVector& s, double tol = 1e-8);

// Hypergraph view of a unitary tanglemeter: one weighted edge per
// bilinear term, one weighted triangle per trilinear term, one weighted
// 4-set per quartic term, entries below tau_crit omitted.
struct GraphEdge {
  uint32_t a = 0, b = 0;
  double w = 0.0;
};
struct GraphTriangle {
  std::array<uint32_t, 3> v{};
  double w = 0.0;
};
struct GraphQuad {
  std::array<uint32_t, 4> v{};
  double w = 0.0;
};
struct EntanglementGraph {
  uint32_t n = 0;
  std::vector<GraphEdge> edges;
  std::vector<GraphTriangle> triangles;
  std::vector<GraphQuad> quads;
};
EntanglementGraph graph_from_tanglemeter(const Tanglemeter& tm,
                                         double tau_crit = 1e-6);
std::string graph_dot(const EntanglementGraph& g);
std::string graph_json(const EntanglementGraph& g);

}  // namespace npent
