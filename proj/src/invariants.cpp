#include "npent/invariants.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <sstream>

#include "json.hpp"
#include "npent/error.hpp"

namespace npent {

namespace {

void require_qubits(const StateVector& s, uint32_t n, const char* who) {
  if (!s.is_qubit_assembly() || s.num_elements() != n)
    throw std::invalid_argument(std::string(who) + " requires " +
                                std::to_string(n) + " qubits");
}

// Index-raised amplitudes: contraction with one antisymmetric epsilon per
// qubit flips every occupation number and contributes a sign per excited
// index.
std::vector<cplx> raise_all(const std::vector<cplx>& psi) {
  const uint64_t d = psi.size();
  std::vector<cplx> up(d);
  for (uint64_t m = 0; m < d; ++m) {
    const int pc = static_cast<int>(std::popcount(m));
    up[m] = ((pc & 1) ? -1.0 : 1.0) * psi[(d - 1) ^ m];
  }
  return up;
}

// Flat index from per-slot bits, slot 0 being the highest element.
inline uint32_t slot4(uint32_t a, uint32_t b, uint32_t c, uint32_t d) {
  return a << 3 | b << 2 | c << 1 | d;
}
inline uint32_t slot3(uint32_t a, uint32_t b, uint32_t c) {
  return a << 2 | b << 1 | c;
}

double purity_raw(const StateVector& s, uint32_t elem) {
  // Unnormalized single-element density, squared and traced.
  cplx rho[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  const uint64_t step = s.stride(elem);
  for (uint64_t m = 0; m < s.dim(); ++m) {
    const uint32_t a = s.level(m, elem);
    for (uint32_t b = 0; b < 2; ++b) {
      const uint64_t mb = m - a * step + b * step;
      rho[a][b] += s.amps[m] * std::conj(s.amps[mb]);
    }
  }
  cplx tr = 0.0;
  for (uint32_t a = 0; a < 2; ++a)
    for (uint32_t b = 0; b < 2; ++b) tr += rho[a][b] * rho[b][a];
  return tr.real();
}

struct CanonBetas3 {
  cplx b3, b5, b6, b7;
  double denom;  // 1 + |b3|^2 + |b5|^2 + |b6|^2 + |b7|^2
};

CanonBetas3 canonic_betas3(const StateVector& s, const CanonOptions& opt) {
  Tanglemeter tm = su_canonicalize(s, opt);
  CanonBetas3 r{};
  r.b3 = tm.poly[3];
  r.b5 = tm.poly[5];
  r.b6 = tm.poly[6];
  r.b7 = tm.poly[7];
  r.denom = 1.0 + std::norm(r.b3) + std::norm(r.b5) + std::norm(r.b6) +
            std::norm(r.b7);
  return r;
}

std::array<cplx, 3> cardano_roots(cplx a, cplx b, cplx c) {
  // z^3 + a z^2 + b z + c = 0 via the depressed cubic.
  const cplx p = b - a * a / 3.0;
  const cplx q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const cplx sd = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  cplx u3 = -q / 2.0 + sd;
  if (std::abs(u3) < 1e-300) u3 = -q / 2.0 - sd;
  const cplx u0 = std::pow(u3, 1.0 / 3.0);
  const cplx w(-0.5, std::sqrt(3.0) / 2.0);
  std::array<cplx, 3> roots;
  cplx u = u0;
  for (int k = 0; k < 3; ++k, u *= w) {
    const cplx v = (std::abs(u) > 1e-300) ? -p / (3.0 * u) : cplx(0.0);
    roots[k] = u + v - a / 3.0;
  }
  return roots;
}

}  // namespace

cplx invariants2(const StateVector& s) {
  require_qubits(s, 2, "invariants2");
  return s.amps[0] * s.amps[3] - s.amps[1] * s.amps[2];
}

Invariants3 invariants3(const StateVector& s) {
  require_qubits(s, 3, "invariants3");
  Invariants3 out;
  out.i1 = purity_raw(s, 2);
  out.i2 = purity_raw(s, 1);
  out.i3 = purity_raw(s, 0);
  const std::vector<cplx>& psi = s.amps;
  const std::vector<cplx> up = raise_all(psi);
  cplx q = 0.0;
  for (uint32_t w = 0; w < 64; ++w) {
    const uint32_t i = w & 1, j = (w >> 1) & 1, k = (w >> 2) & 1,
                   p = (w >> 3) & 1, m = (w >> 4) & 1, n = (w >> 5) & 1;
    q += psi[slot3(i, j, k)] * up[slot3(i, j, p)] * psi[slot3(m, n, p)] *
         up[slot3(m, n, k)];
  }
  out.i4 = q.real();
  out.i5 = q.imag();
  return out;
}

double concurrence(const StateVector& s, uint32_t a, uint32_t b,
                   const CanonOptions& opt) {
  require_qubits(s, 3, "concurrence");
  if (a == b || a > 2 || b > 2)
    throw std::invalid_argument("concurrence: invalid element pair");
  const CanonBetas3 cb = canonic_betas3(s, opt);
  const uint32_t c = 3 - a - b;  // remaining element
  auto bond = [&](uint32_t i, uint32_t j) {
    const uint32_t mask = (1u << i) | (1u << j);
    if (mask == 3) return cb.b3;
    if (mask == 5) return cb.b5;
    return cb.b6;
  };
  const double direct = std::abs(bond(a, b));
  const double via = std::abs(bond(a, c) * bond(c, b));
  return 2.0 * std::abs(direct - via) / cb.denom;
}

double three_tangle(const StateVector& s, const CanonOptions& opt) {
  require_qubits(s, 3, "three_tangle");
  const CanonBetas3 cb = canonic_betas3(s, opt);
  const double num =
      std::abs(cb.b7 * cb.b7 + 4.0 * cb.b3 * cb.b5 * cb.b6);
  return 4.0 * num / (cb.denom * cb.denom);
}

Invariants4 invariants4(const StateVector& s) {
  require_qubits(s, 4, "invariants4");
  const std::vector<cplx>& psi = s.amps;
  const std::vector<cplx> up = raise_all(psi);
  Invariants4 out;

  cplx i2 = 0.0;
  for (uint32_t m = 0; m < 16; ++m) i2 += psi[m] * up[m];
  out.i2 = 0.5 * i2;

  cplx j12 = 0.0, j13 = 0.0, j14 = 0.0;
  for (uint32_t w = 0; w < 256; ++w) {
    const uint32_t i = w & 1, j = (w >> 1) & 1, k = (w >> 2) & 1,
                   l = (w >> 3) & 1, m = (w >> 4) & 1, n = (w >> 5) & 1,
                   o = (w >> 6) & 1, p = (w >> 7) & 1;
    j12 += psi[slot4(i, j, k, l)] * up[slot4(i, j, m, n)] *
           psi[slot4(o, p, m, n)] * up[slot4(o, p, k, l)];
    j13 += psi[slot4(i, k, j, l)] * up[slot4(i, m, j, n)] *
           psi[slot4(o, m, p, n)] * up[slot4(o, k, p, l)];
    j14 += psi[slot4(i, k, l, j)] * up[slot4(i, m, n, j)] *
           psi[slot4(o, m, n, p)] * up[slot4(o, k, l, p)];
  }
  out.i4_12 = 0.25 * j12;
  out.i4_13 = 0.25 * j13;
  out.i4_14 = 0.25 * j14;

  cplx k12 = 0.0, k23 = 0.0, k13 = 0.0;
  for (uint32_t w = 0; w < 4096; ++w) {
    const uint32_t i = w & 1, n = (w >> 1) & 1, g = (w >> 2) & 1,
                   d = (w >> 3) & 1, m = (w >> 4) & 1, r = (w >> 5) & 1,
                   k = (w >> 6) & 1, o = (w >> 7) & 1, t = (w >> 8) & 1,
                   j = (w >> 9) & 1, p = (w >> 10) & 1, h = (w >> 11) & 1;
    const cplx raised = up[slot4(m, r, g, d)] * up[slot4(i, n, p, h)] *
                        up[slot4(t, j, k, o)];
    k12 += (psi[slot4(i, n, g, d)] * psi[slot4(m, r, k, o)] *
                psi[slot4(t, j, p, h)] -
            psi[slot4(i, n, g, o)] * psi[slot4(m, r, k, h)] *
                psi[slot4(t, j, p, d)]) *
           raised;
    k23 += (psi[slot4(i, j, p, o)] * psi[slot4(m, n, g, h)] *
                psi[slot4(t, r, k, d)] -
            psi[slot4(i, j, p, d)] * psi[slot4(m, n, g, o)] *
                psi[slot4(t, r, k, h)]) *
           raised;
    k13 += (psi[slot4(i, j, k, h)] * psi[slot4(m, n, p, d)] *
                psi[slot4(t, r, g, o)] -
            psi[slot4(i, j, g, h)] * psi[slot4(m, n, k, d)] *
                psi[slot4(t, r, p, o)]) *
           raised;
  }
  // The two off-axis sextic patterns are attached to the bipartition
  // labels that make the closed forms on the scaled canonic state hold.
  out.i6_12 = k12 / 6.0;
  out.i6_23 = k13 / 6.0;
  out.i6_13 = k23 / 6.0;
  return out;
}

Reconstruction4 reconstruct4(const Invariants4& inv, double tol) {
  const cplx i2 = inv.i2;
  if (std::abs(i2) < tol)
    throw DomainError("DEGENERATE",
                      "quadratic invariant vanishes; the inverse map "
                      "divides by its roots");
  const cplx a = inv.i6_12, b = inv.i6_23, c = inv.i6_13;
  const cplx i2c = i2 * i2 * i2;
  const std::array<cplx, 3> roots =
      cardano_roots(a + b + c - i2c, a * b + a * c + b * c, a * b * c);
  const cplx q = std::pow(i2, 0.25);
  const cplx h0 = std::pow(i2, 1.5);

  Reconstruction4 out;
  double best_nu = -1.0, best_sl = -1.0;
  for (const cplx& P : roots) {
    const cplx su = std::sqrt(inv.i6_12 + P);  // pairs with beta3
    const cplx sv = std::sqrt(inv.i6_23 + P);  // pairs with beta5
    const cplx sw = std::sqrt(inv.i6_13 + P);  // pairs with beta6
    for (uint32_t sg = 0; sg < 16; ++sg) {
      const cplx u = (sg & 1) ? -su : su;
      const cplx v = (sg & 2) ? -sv : sv;
      const cplx w = (sg & 4) ? -sw : sw;
      const cplx h = (sg & 8) ? -h0 : h0;
      // The system determines the root as the product of the signed
      // square-root variables: admissible sign assignments satisfy
      // u v w = P h, everything else solves a different invariant set.
      if (std::abs(u * v * w - P * h) >
          1e-6 * (std::abs(u * v * w) + std::abs(P * h) + tol))
        continue;
      const cplx s0 = u + v + w - h;
      if (std::abs(s0) < 1e-14 * std::abs(i2)) continue;
      const cplx psi0 = std::sqrt(s0) / (std::sqrt(2.0) * q);
      const cplx a3 = std::sqrt(u - v - w + h) / (2.0 * q);
      const cplx a5 = std::sqrt(v - u - w + h) / (2.0 * q);
      const cplx a6 = std::sqrt(w - u - v + h) / (2.0 * q);
      const cplx a15 = (u + v + w + h) /
                       (2.0 * std::sqrt(2.0) * q * std::sqrt(s0));
      ReconCandidate cand;
      cand.P = P;
      cand.beta3 = a3 / psi0;
      cand.beta5 = a5 / psi0;
      cand.beta6 = a6 / psi0;
      const double ssum = std::norm(psi0) + std::norm(a15) +
                          2.0 * (std::norm(a3) + std::norm(a5) +
                                 std::norm(a6));
      cand.nonunitarity = std::abs(std::log(ssum));
      cand.sl_measure = std::norm(cand.beta3) + std::norm(cand.beta5) +
                        std::norm(cand.beta6);
      out.candidates.push_back(cand);
      if (best_nu < 0.0 || cand.nonunitarity < best_nu - 1e-12 ||
          (cand.nonunitarity < best_nu + 1e-12 &&
           std::abs(cand.P) < std::abs(out.best.P))) {
        best_nu = cand.nonunitarity;
        out.best = cand;
      }
      if (best_sl < 0.0 || cand.sl_measure < best_sl - 1e-12 ||
          (cand.sl_measure < best_sl + 1e-12 &&
           std::abs(cand.P) < std::abs(out.best_sl.P))) {
        best_sl = cand.sl_measure;
        out.best_sl = cand;
      }
    }
  }
  if (out.candidates.empty())
    throw DomainError("DEGENERATE", "no admissible reconstruction branch");
  return out;
}

Measures4 measures4(const StateVector& s, double tol) {
  require_qubits(s, 4, "measures4");
  StateVector t = s;
  t.normalize();
  const Invariants4 inv = invariants4(t);
  const Reconstruction4 rec = reconstruct4(inv, tol);
  Measures4 out;
  out.nonunitarity = rec.best.nonunitarity;
  out.sl_measure = rec.best_sl.sl_measure;
  out.poly_su = std::abs(inv.i2);
  out.poly_sl = (std::abs(inv.i6_13) + std::abs(inv.i6_23) +
                 std::abs(inv.i6_12)) /
                (std::abs(inv.i2) * std::abs(inv.i2));
  return out;
}

std::string measures4_csv(uint32_t samples, uint64_t seed0) {
  std::ostringstream os;
  os << "seed,poly_su,nonunitarity,poly_sl,sl_measure\n";
  os.precision(12);
  for (uint32_t k = 0; k < samples; ++k) {
    const uint64_t seed = seed0 + k;
    const StateVector s = random_state({2, 2, 2, 2}, seed);
    try {
      const Measures4 m = measures4(s);
      os << seed << ',' << m.poly_su << ',' << m.nonunitarity << ','
         << m.poly_sl << ',' << m.sl_measure << '\n';
    } catch (const DomainError&) {
      os << seed << ",nan,nan,nan,nan\n";
    }
  }
  return os.str();
}

ZetaFilter zeta_filter(const StateVector& s, double tol) {
  require_qubits(s, 3, "zeta_filter");
  const cplx a0 = s.amps[0], a3 = s.amps[3], a5 = s.amps[5],
             a6 = s.amps[6], a7 = s.amps[7];
  const double scale = std::sqrt(s.norm_sq());
  if (std::abs(a0) < tol * scale || std::abs(a3) < tol * scale ||
      std::abs(a5) < tol * scale || std::abs(a6) < tol * scale)
    throw DomainError(
        "NOT_IN_GENERIC_ORBIT",
        "zeta_filter requires nonzero reference and bilinear amplitudes");
  ZetaFilter out;
  out.zeta = a7 * a7 * a0 / (a6 * a3 * a5);
  // -(1+2z)^2 / (z(1+z)) = zeta  <=>  (4+zeta) z^2 + (4+zeta) z + 1 = 0.
  const cplx g = 4.0 + out.zeta;
  if (std::abs(g) < tol)
    throw DomainError("NOT_IN_GENERIC_ORBIT",
                      "cross ratio sits at the excluded value -4");
  const cplx disc = std::sqrt(1.0 - 4.0 / g);
  out.z_roots = {(-1.0 + disc) / 2.0, (-1.0 - disc) / 2.0};
  // Exact reproduction of the dressed state needs the root with
  // 1 + 2z = 2 a0 a7; pick whichever root comes closer to that relation.
  const cplx target = 2.0 * a0 * a7;
  out.z = (std::abs(1.0 + 2.0 * out.z_roots[0] - target) <=
           std::abs(1.0 + 2.0 * out.z_roots[1] - target))
              ? out.z_roots[0]
              : out.z_roots[1];
  const cplx z = out.z;
  const cplx one_pz = 1.0 + z;

  // Each bilinear amplitude times the reference amplitude isolates the
  // combination g_k = C_k e^{2 B_k} of the element absent from the pair:
  //   a_ij a0 = z(1+z) / (2 g_k).
  const std::array<cplx, 3> G = {z * one_pz / (2.0 * a6 * a0),
                                 z * one_pz / (2.0 * a5 * a0),
                                 z * one_pz / (2.0 * a3 * a0)};
  // e^{-(B0+B1+B2)} from the reference amplitude; the split between the
  // three elements is pure gauge, so share it equally.
  const cplx sumB = -std::log(a0 * std::sqrt(2.0) / (one_pz * one_pz));
  for (uint32_t i = 0; i < 3; ++i) {
    AbcTriple t;
    t.B = sumB / 3.0;
    t.C = G[i] * std::exp(-2.0 * t.B);
    t.A = z / G[i];
    out.ops[i] = t;
  }
  return out;
}

PeresReport peres_relations(const StateVector& s, double tol) {
  require_qubits(s, 4, "peres_relations");
  StateVector t = s;
  t.normalize();
  const std::vector<cplx>& a = t.amps;
  auto supported = [&](std::initializer_list<uint32_t> masks) {
    for (uint32_t m = 1; m < 16; ++m) {
      bool ok = false;
      for (uint32_t mm : masks) ok = ok || (m == mm);
      if (!ok && std::abs(a[m]) > tol) return false;
    }
    return true;
  };

  PeresReport rep;
  double s12, p12, s34, p34;
  if (supported({3, 5, 6, 9, 10, 12})) {
    // The closed forms hold on the scaled canonic form, where opposite
    // bilinears carry equal amplitudes.
    if (std::abs(a[3] - a[12]) > 1e-6 || std::abs(a[6] - a[9]) > 1e-6 ||
        std::abs(a[5] - a[10]) > 1e-6)
      throw DomainError("UNSUPPORTED_FORM",
                        "bilinear amplitudes are not paired");
    rep.form = "bilinear";
    // {|01>,|10>} block of the partial transpose.
    s12 = std::norm(a[9]) + std::norm(a[6]) + std::norm(a[5]) +
          std::norm(a[10]);
    p12 = (std::norm(a[9]) + std::norm(a[5])) *
              (std::norm(a[6]) + std::norm(a[10])) -
          std::norm(a[12] * a[0]);
    // {|00>,|11>} block.
    const cplx off = a[5] * std::conj(a[9]) + a[6] * std::conj(a[10]);
    s34 = std::norm(a[0]) + std::norm(a[3]) + std::norm(a[12]);
    p34 = (std::norm(a[0]) + std::norm(a[3])) * std::norm(a[12]) -
          std::norm(off);
  } else if (supported({7, 11, 13, 14})) {
    rep.form = "trilinear";
    s12 = std::norm(a[0]) + std::norm(a[13]) + std::norm(a[14]);
    p12 = std::norm(a[0] * a[13]) + std::norm(a[0] * a[14]) -
          std::norm(a[7] * a[11]);
    s34 = std::norm(a[7]) + std::norm(a[11]);
    p34 = std::norm(a[7] * a[11]);
  } else {
    throw DomainError("UNSUPPORTED_FORM",
                      "state is neither purely bilinear nor purely "
                      "trilinear over the reference");
  }

  // Numeric spectrum of the partial transpose of the reduced density of
  // the two highest elements.
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (uint32_t m = 0; m < 16; ++m)
    for (uint32_t mp = 0; mp < 16; ++mp) {
      if ((m & 3) != (mp & 3)) continue;
      rho(m >> 2, mp >> 2) += a[m] * std::conj(a[mp]);
    }
  Eigen::Matrix4cd pt;
  for (uint32_t r = 0; r < 4; ++r)
    for (uint32_t c = 0; c < 4; ++c)
      pt((r & ~1u) | (c & 1u), (c & ~1u) | (r & 1u)) = rho(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(pt);

  auto pair_roots = [](double sum, double prod, double* lo, double* hi) {
    const double d = std::max(sum * sum / 4.0 - prod, 0.0);
    *lo = sum / 2.0 - std::sqrt(d);
    *hi = sum / 2.0 + std::sqrt(d);
  };
  std::array<double, 4> pred;
  pair_roots(s12, p12, &pred[0], &pred[1]);
  pair_roots(s34, p34, &pred[2], &pred[3]);
  std::sort(pred.begin(), pred.end());
  std::array<double, 4> eig;
  for (uint32_t i = 0; i < 4; ++i) eig[i] = es.eigenvalues()(i);
  std::sort(eig.begin(), eig.end());
  rep.kappa = eig;
  rep.predicted = pred;
  rep.residual = 0.0;
  for (uint32_t i = 0; i < 4; ++i)
    rep.residual = std::max(rep.residual, std::abs(pred[i] - eig[i]));
  rep.negative = eig[0] < -tol;
  return rep;
}

EntanglementGraph graph_from_tanglemeter(const Tanglemeter& tm,
                                         double tau_crit) {
  const NilPoly& f = tm.poly;
  EntanglementGraph g;
  g.n = f.num_elements();
  for (uint64_t m = 0; m < f.size(); ++m) {
    const double w = std::abs(f[m]);
    if (w < tau_crit) continue;
    std::vector<uint32_t> members;
    for (uint32_t e = 0; e < g.n; ++e)
      if (f.exponent(m, e) > 0) members.push_back(e);
    if (members.size() == 2) {
      g.edges.push_back({members[0], members[1], w});
    } else if (members.size() == 3) {
      g.triangles.push_back({{members[0], members[1], members[2]}, w});
    } else if (members.size() == 4) {
      g.quads.push_back({{members[0], members[1], members[2], members[3]},
                         w});
    }
  }
  return g;
}

std::string graph_dot(const EntanglementGraph& g) {
  std::ostringstream os;
  os.precision(6);
  os << "graph entanglement {\n";
  for (uint32_t e = 0; e < g.n; ++e) os << "  q" << e << ";\n";
  for (const GraphEdge& e : g.edges)
    os << "  q" << e.a << " -- q" << e.b << " [label=\"" << e.w
       << "\"];\n";
  uint32_t cluster = 0;
  for (const GraphTriangle& t : g.triangles) {
    os << "  subgraph cluster_t" << cluster++ << " {\n"
       << "    label=\"triangle w=" << t.w << "\";\n    ";
    for (uint32_t v : t.v) os << "q" << v << "; ";
    os << "\n  }\n";
  }
  for (const GraphQuad& t : g.quads) {
    os << "  subgraph cluster_q" << cluster++ << " {\n"
       << "    label=\"4-set w=" << t.w << "\";\n    ";
    for (uint32_t v : t.v) os << "q" << v << "; ";
    os << "\n  }\n";
  }
  os << "}\n";
  return os.str();
}

std::string graph_json(const EntanglementGraph& g) {
  nlohmann::json j;
  j["nodes"] = g.n;
  j["edges"] = nlohmann::json::array();
  for (const GraphEdge& e : g.edges)
    j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"w", e.w}});
  j["triangles"] = nlohmann::json::array();
  for (const GraphTriangle& t : g.triangles)
    j["triangles"].push_back(
        {{"v", {t.v[0], t.v[1], t.v[2]}}, {"w", t.w}});
  j["quads"] = nlohmann::json::array();
  for (const GraphQuad& t : g.quads)
    j["quads"].push_back(
        {{"v", {t.v[0], t.v[1], t.v[2], t.v[3]}}, {"w", t.w}});
  return j.dump(2);
}

}  // namespace npent
