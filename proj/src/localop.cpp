#include "npent/localop.hpp"

#include <cmath>

#include "npent/error.hpp"

namespace npent {

namespace {
const cplx kI(0.0, 1.0);

// Monomial polynomial sigma_elem within the given shape.
NilPoly generator_poly(const NilPoly& like, uint32_t elem) {
  NilPoly g(like.caps(), like.rule());
  g[like.stride(elem)] = 1.0;
  return g;
}

NilPoly constant_poly(const NilPoly& like, cplx v) {
  NilPoly c(like.caps(), like.rule());
  c[0] = v;
  return c;
}
}  // namespace

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, kI, -kI, 0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << -1, 0, 0, 1;
  return m;
}

Eigen::Matrix2cd sigma_plus() {
  Eigen::Matrix2cd m;
  m << 0, 0, 1, 0;
  return m;
}

Eigen::Matrix2cd sigma_minus() {
  Eigen::Matrix2cd m;
  m << 0, 1, 0, 0;
  return m;
}

Eigen::Matrix2cd su2_matrix(const std::array<cplx, 3>& P) {
  // M = i P.sigma squares to -(P.P) I, so the exponential is
  // cos(p) I + sinc(p) M with p = sqrt(P.P) (principal branch; entire in
  // P.P, so the branch choice is immaterial).
  Eigen::Matrix2cd M =
      kI * (P[0] * pauli_x() + P[1] * pauli_y() + P[2] * pauli_z());
  cplx p2 = P[0] * P[0] + P[1] * P[1] + P[2] * P[2];
  cplx p = std::sqrt(p2);
  cplx c, s;
  if (std::abs(p) < 1e-8) {
    // Series in p^2 to keep full precision near zero.
    c = 1.0 - p2 / 2.0 + p2 * p2 / 24.0;
    s = 1.0 - p2 / 6.0 + p2 * p2 / 120.0;
  } else {
    c = std::cos(p);
    s = std::sin(p) / p;
  }
  return c * Eigen::Matrix2cd::Identity() + s * M;
}

AbcTriple matrix_to_abc(const Eigen::Matrix2cd& u) {
  cplx eb = u(1, 1);
  if (std::abs(eb) < 1e-12)
    throw DomainError("SINGULAR_FACTORIZATION",
                      "factorization chart singular for this matrix");
  AbcTriple t;
  t.B = std::log(eb);
  t.A = u(0, 1) / eb;
  t.C = u(1, 0) / eb;
  // Chart covers matrices of determinant u00*u11 - u01*u10; the upper-left
  // entry is reproduced as e^-B + A C e^B only for determinant-1 inputs.
  return t;
}

AbcTriple su2_to_abc(const std::array<cplx, 3>& P) {
  return matrix_to_abc(su2_matrix(P));
}

Eigen::Matrix2cd abc_matrix(const AbcTriple& t) {
  cplx eb = std::exp(t.B);
  Eigen::Matrix2cd m;
  m << 1.0 / eb + t.A * t.C * eb, t.A * eb, t.C * eb, eb;
  return m;
}

LocalOp make_local_op(uint32_t element, const Eigen::Matrix2cd& m) {
  LocalOp op;
  op.element = element;
  op.matrix = m;
  try {
    op.abc = matrix_to_abc(m);
  } catch (const DomainError&) {
    op.abc.reset();
  }
  return op;
}

LocalOp make_local_op(uint32_t element, const std::array<cplx, 3>& P) {
  return make_local_op(element, su2_matrix(P));
}

Eigen::Matrix4cd gate_matrix(double t) {
  // Basis order (00, 01, 10, 11) little-endian in (i, j): index bit0 = i.
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  m(1, 1) = std::cos(t);
  m(2, 2) = std::cos(t);
  m(1, 2) = kI * std::sin(t);
  m(2, 1) = kI * std::sin(t);
  return m;
}

NilPoly apply_local_to_poly(const NilPoly& F, const LocalOp& op) {
  if (!op.abc)
    throw DomainError("SINGULAR_FACTORIZATION",
                      "local op lacks a factorization; compose two ops");
  const AbcTriple& t = *op.abc;
  cplx e2b = std::exp(2.0 * t.B);
  NilPoly shifted = F + mul(F, generator_poly(F, op.element)) * t.C;
  NilPoly out =
      affine_substitute(shifted, op.element, e2b * t.A, e2b) *
      std::exp(-t.B);
  if (std::abs(out[0]) < 1e-6 * out.max_abs())
    throw DomainError("VACUUM_ZERO", "vacuum amplitude vanished under op");
  return out;
}

NilPoly apply_gate(const NilPoly& F, const GateOp& gate) {
  if (gate.i == gate.j) throw std::invalid_argument("apply_gate: i == j");
  NilPoly out = F;
  uint64_t si = F.stride(gate.i), sj = F.stride(gate.j);
  cplx c = std::cos(gate.t), is = kI * std::sin(gate.t);
  for (uint64_t m = 0; m < F.size(); ++m) {
    bool bi = F.exponent(m, gate.i) == 1;
    bool bj = F.exponent(m, gate.j) == 1;
    if (bi == bj) continue;  // both-or-neither sectors are left intact
    if (bi) {
      uint64_t other = m - si + sj;
      out[m] = c * F[m] + is * F[other];
    } else {
      uint64_t other = m - sj + si;
      out[m] = c * F[m] + is * F[other];
    }
  }
  return out;
}

StateVector apply_gate_state(const StateVector& s, const GateOp& gate) {
  if (gate.i == gate.j) throw std::invalid_argument("apply_gate: i == j");
  StateVector out = s;
  uint64_t si = s.stride(gate.i), sj = s.stride(gate.j);
  cplx c = std::cos(gate.t), is = kI * std::sin(gate.t);
  for (uint64_t m = 0; m < s.amps.size(); ++m) {
    bool bi = s.level(m, gate.i) == 1;
    bool bj = s.level(m, gate.j) == 1;
    if (bi == bj) continue;
    uint64_t other = bi ? m - si + sj : m - sj + si;
    out.amps[m] = c * s.amps[m] + is * s.amps[other];
  }
  return out;
}

NilPoly transform_nilpotential(const NilPoly& f, uint32_t elem, double P,
                               double phi) {
  cplx eip = std::exp(kI * phi);
  double cp = std::cos(P), sp = std::sin(P);
  NilPoly fi = partial(f, elem);
  // cos(P) + i e^{i phi} sin(P) f_i: both the new vacuum log and, after
  // clearing tan(P) of its cos(P) denominator, the correction denominator.
  NilPoly logarg = fi * (kI * eip * sp);
  logarg[0] += cp;
  if (std::abs(logarg[0]) < 1e-6)
    throw DomainError("VACUUM_ZERO", "vacuum amplitude vanished under op");
  NilPoly numer = mul(fi, fi) * eip - constant_poly(f, std::conj(eip));
  NilPoly corr = mul(numer, inv_unit(logarg)) * (-kI * sp);
  NilPoly out = f + log_unit(logarg) +
                mul(generator_poly(f, elem), corr);
  out[0] = 0.0;
  return out;
}

NilPoly transform_nilpotential(const NilPoly& f, const GateOp& gate) {
  if (gate.i == gate.j) throw std::invalid_argument("gate: i == j");
  double t = gate.t;
  double omc = 1.0 - std::cos(t), st = std::sin(t);
  double s2t = std::sin(2.0 * t), sst = st * st;
  NilPoly fi = partial(f, gate.i);
  NilPoly fj = partial(f, gate.j);
  NilPoly fij = partial(fi, gate.j);
  NilPoly gi = generator_poly(f, gate.i);
  NilPoly gj = generator_poly(f, gate.j);
  NilPoly gij = mul(gi, gj);
  NilPoly out = f + mul(gij, fij) * (2.0 * omc);
  out -= mul(gj * omc - gi * (kI * st), fj);
  out -= mul(gi * omc - gj * (kI * st), fi);
  NilPoly bracket = (mul(fi, fi) + mul(fj, fj)) * (s2t / 2.0) +
                    mul(fi, fj) * (2.0 * kI * sst);
  out -= mul(gij, bracket) * kI;
  out[0] = 0.0;
  return out;
}

}  // namespace npent
