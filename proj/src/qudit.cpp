#include "npent/qudit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "npent/error.hpp"

namespace npent {

namespace {

const cplx kI(0.0, 1.0);

// Diagonal Cartan generators matching the conventional su(d) choice when
// displayed with the highest level first; entry for our level l is the
// display entry d-1-l.
std::vector<Eigen::MatrixXcd> make_cartan(uint32_t d) {
  std::vector<Eigen::MatrixXcd> out;
  for (uint32_t k = 1; k < d; ++k) {
    Eigen::VectorXd disp = Eigen::VectorXd::Zero(d);
    for (uint32_t j = 0; j < k; ++j) disp(j) = 1.0;
    disp(k) = -static_cast<double>(k);
    disp *= std::sqrt(2.0 / (static_cast<double>(k) * (k + 1.0)));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (uint32_t l = 0; l < d; ++l) m(l, l) = disp(d - 1 - l);
    out.push_back(m);
  }
  return out;
}

Eigen::MatrixXcd unit_matrix(uint32_t d, uint32_t r, uint32_t c) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  m(r, c) = 1.0;
  return m;
}

}  // namespace

CartanWeyl cartan_weyl(uint32_t d) {
  if (d < 2) throw std::invalid_argument("cartan_weyl: d >= 2 required");
  CartanWeyl cw;
  cw.d = d;
  cw.cartan = make_cartan(d);
  for (uint32_t a = 0; a < d; ++a)
    for (uint32_t b = a + 1; b < d; ++b)
      cw.raising.push_back(unit_matrix(d, b, a));
  for (uint32_t k = 1; k < d; ++k) cw.nu.push_back(unit_matrix(d, k, 0));
  return cw;
}

namespace {

// Unitary on the levels [base, d) whose first active row maps the
// amplitude slice v onto its norm; remaining active rows are an
// orthonormal completion, so every other target-adjacent amplitude
// vanishes after application.
Eigen::MatrixXcd focus_unitary(uint32_t d, uint32_t base,
                               const Eigen::VectorXcd& v) {
  const uint32_t blk = d - base;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(blk, blk);
  a.col(0) = v.normalized();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  // QR leaves the first column proportional to v; absorb the phase so it
  // matches exactly.
  cplx ip = q.col(0).dot(v.normalized());
  q.col(0) *= ip / std::abs(ip);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
  u.block(base, base, blk, blk) = q.adjoint();
  return u;
}

// Phase stage: one designated coefficient per element and level is made
// real positive (the element at that level, every other element at its
// top level); reduces to the order-(n-1) qubit convention for d_i = 2.
void qudit_fix_phases(StateVector& s) {
  const uint32_t n = s.num_elements();
  if (n < 2) return;
  NilPoly f = nilpotential(s);
  const std::vector<uint32_t>& caps = f.caps();
  std::vector<uint32_t> top(n);
  for (uint32_t i = 0; i < n; ++i) top[i] = caps[i];
  auto designated = [&](uint32_t i, uint32_t level) {
    std::vector<uint32_t> e = top;
    e[i] = level;
    return f.flat_index(e);
  };
  // Relative phases r[i][a] of level a against level 0.
  std::vector<std::vector<double>> r(n);
  for (uint32_t i = 0; i < n; ++i) r[i].assign(caps[i] + 1, 0.0);
  // Top-level phases from the all-top-but-one coefficients.
  std::vector<cplx> c(n);
  bool regular = true;
  for (uint32_t i = 0; i < n; ++i) {
    c[i] = f[designated(i, 0)];
    if (std::abs(c[i]) < 1e-8) regular = false;
  }
  if (regular) {
    double big = 0.0;
    for (uint32_t i = 0; i < n; ++i) big -= std::arg(c[i]);
    big /= static_cast<double>(n - 1);
    for (uint32_t i = 0; i < n; ++i) r[i][top[i]] = std::arg(c[i]) + big;
    // Lower levels in turn: each designated coefficient adds exactly one
    // not-yet-fixed phase on top of the known top-level ones.
    for (uint32_t i = 0; i < n; ++i) {
      for (uint32_t level = 1; level < caps[i]; ++level) {
        const cplx cc = f[designated(i, level)];
        if (std::abs(cc) < 1e-8) continue;
        double others = 0.0;
        for (uint32_t j = 0; j < n; ++j)
          if (j != i) others += r[j][top[j]];
        r[i][level] = -std::arg(cc) - others;
      }
    }
  } else {
    // Degenerate support: greedy rank-building constraints over the
    // largest-modulus coefficients, minimum-norm solve for all relative
    // level phases at once.
    std::vector<std::pair<uint32_t, uint32_t>> unknowns;
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t a = 1; a <= caps[i]; ++a) unknowns.push_back({i, a});
    const uint32_t nu = static_cast<uint32_t>(unknowns.size());
    std::vector<uint64_t> order;
    for (uint64_t m = 1; m < f.size(); ++m)
      if (std::abs(f[m]) > 1e-10) order.push_back(m);
    std::sort(order.begin(), order.end(), [&](uint64_t a, uint64_t b) {
      double da = std::abs(f[a]), db = std::abs(f[b]);
      return da != db ? da > db : a < b;
    });
    Eigen::MatrixXd rows(0, nu);
    Eigen::VectorXd vals(0);
    for (uint64_t m : order) {
      if (rows.rows() == nu) break;
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nu);
      for (uint32_t u = 0; u < nu; ++u)
        if (f.exponent(m, unknowns[u].first) == unknowns[u].second)
          row(u) = 1.0;
      Eigen::MatrixXd cand(rows.rows() + 1, nu);
      cand << rows, row;
      if (cand.colPivHouseholderQr().rank() > rows.rows()) {
        Eigen::VectorXd v(vals.size() + 1);
        v << vals, -std::arg(f[m]);
        rows = cand;
        vals = v;
      }
    }
    if (rows.rows() > 0) {
      Eigen::VectorXd t =
          rows.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(vals);
      for (uint32_t u = 0; u < nu; ++u)
        r[unknowns[u].first][unknowns[u].second] = t(u);
    }
  }
  // The convention leaves a residual shift of all top-level phases by
  // k * 2pi/(n-1) that preserves every designated coefficient while
  // rotating the others; resolve it by maximizing the real part (then
  // imaginary part) of the largest affected coefficient, matching the
  // all-qubit convention.
  if (n >= 3) {
    const double delta = 2.0 * M_PI / static_cast<double>(n - 1);
    auto top_count = [&](uint64_t m) {
      uint32_t count = 0;
      for (uint32_t i = 0; i < n; ++i)
        if (f.exponent(m, i) == top[i]) ++count;
      return count;
    };
    uint64_t mstar = 0;
    double mag = 1e-10;
    for (uint64_t m = 1; m < f.size(); ++m)
      if (top_count(m) % (n - 1) != 0 && std::abs(f[m]) > mag) {
        mag = std::abs(f[m]);
        mstar = m;
      }
    if (mstar) {
      const uint32_t count = top_count(mstar);
      double base = 0.0;
      for (uint32_t i = 0; i < n; ++i) base += r[i][f.exponent(mstar, i)];
      uint32_t kbest = 0;
      cplx vbest = f[mstar] * std::exp(kI * base);
      for (uint32_t k = 1; k + 1 < n; ++k) {
        const cplx v = f[mstar] * std::exp(kI * (base + k * delta * count));
        if (v.real() > vbest.real() + 1e-12 ||
            (std::abs(v.real() - vbest.real()) <= 1e-12 &&
             v.imag() > vbest.imag())) {
          vbest = v;
          kbest = k;
        }
      }
      for (uint32_t i = 0; i < n; ++i) r[i][top[i]] += kbest * delta;
    }
  }
  for (uint32_t i = 0; i < n; ++i) {
    const uint32_t d = s.dims[i];
    double sum = 0.0;
    for (uint32_t a = 1; a < d; ++a) sum += r[i][a];
    const double phi0 = -sum / static_cast<double>(d);
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(d, d);
    for (uint32_t a = 0; a < d; ++a)
      z(a, a) = std::exp(kI * (phi0 + (a ? r[i][a] : 0.0)));
    s = apply_matrix(s, i, z);
  }
}

}  // namespace

Tanglemeter qudit_su_canonicalize(const StateVector& s0,
                                  const CanonOptions& opt) {
  StateVector s = s0;
  s.normalize();
  const uint32_t n = s.num_elements();
  uint32_t maxd = 0;
  for (uint32_t d : s.dims) maxd = std::max(maxd, d);
  uint32_t iter = 0;
  double residual = 0.0;
  for (uint32_t stage = 0; stage + 1 < maxd; ++stage) {
    uint64_t target = 0;
    std::vector<uint32_t> active;
    for (uint32_t i = 0; i < n; ++i) {
      target += static_cast<uint64_t>(std::min(stage, s.dims[i] - 1)) *
                s.stride(i);
      if (s.dims[i] > stage + 1) active.push_back(i);
    }
    for (;; ++iter) {
      if (iter > opt.max_iter)
        throw DomainError("NONCONVERGED",
                          "adjacent residual " + std::to_string(residual) +
                              " after max_iter sweeps");
      residual = 0.0;
      for (uint32_t i : active)
        for (uint32_t b = stage + 1; b < s.dims[i]; ++b)
          residual = std::max(
              residual,
              std::abs(s.amps[target + (b - stage) * s.stride(i)]));
      if (residual < opt.tol) break;
      for (uint32_t i : active) {
        const uint32_t blk = s.dims[i] - stage;
        Eigen::VectorXcd v(blk);
        for (uint32_t a = 0; a < blk; ++a)
          v(a) = s.amps[target + a * s.stride(i)];
        if (v.norm() < 1e-14) continue;
        s = apply_matrix(s, i, focus_unitary(s.dims[i], stage, v));
      }
    }
  }
  qudit_fix_phases(s);
  Tanglemeter t;
  t.group = CanonGroup::SU;
  t.vacuum_factor = s.amps[0];
  t.poly = nilpotential(s);
  t.poly[0] = 0.0;
  t.iterations = iter;
  t.residual = residual;
  return t;
}

bool sl_qutrit_form(const NilPoly& f, double tol, cplx* beta_g, cplx* beta_u) {
  if (f.num_elements() != 3 || f.caps() != std::vector<uint32_t>{2, 2, 2})
    throw std::invalid_argument("sl_qutrit_form: three qutrits required");
  // Element exponent triples (e0, e1, e2) of the admitted monomials.
  static const uint64_t kGTriple[3] = {21, 7, 11};   // (0,1,2) (1,2,0) (2,0,1)
  static const uint64_t kUTriple[3] = {5, 19, 15};   // (2,1,0) (1,0,2) (0,2,1)
  static const uint64_t kCubic[2] = {13, 26};        // (1,1,1) (2,2,2)
  const cplx g = f[kGTriple[0]], u = f[kUTriple[0]];
  bool ok = true;
  for (uint64_t m : kGTriple) ok = ok && std::abs(f[m] - g) < tol;
  for (uint64_t m : kUTriple) ok = ok && std::abs(f[m] - u) < tol;
  for (uint64_t m : kCubic) ok = ok && std::abs(f[m] - 1.0) < tol;
  for (uint64_t m = 1; m < f.size(); ++m) {
    bool admitted = false;
    for (uint64_t a : kGTriple) admitted = admitted || m == a;
    for (uint64_t a : kUTriple) admitted = admitted || m == a;
    for (uint64_t a : kCubic) admitted = admitted || m == a;
    if (!admitted) ok = ok && std::abs(f[m]) < tol;
  }
  if (beta_g) *beta_g = g;
  if (beta_u) *beta_u = u;
  return ok;
}

RestrictedAlgebra spin1_algebra() {
  RestrictedAlgebra alg;
  alg.d = 3;
  alg.raise_op = unit_matrix(3, 1, 0) + unit_matrix(3, 2, 1);
  alg.spin_plus = std::sqrt(2.0) * alg.raise_op;
  alg.weight_op = Eigen::MatrixXcd::Zero(3, 3);
  alg.weight_op(0, 0) = -1.0;
  alg.weight_op(2, 2) = 1.0;
  alg.order = 3;
  return alg;
}

NilPoly generating_function(const StateVector& s,
                            const RestrictedAlgebra& alg) {
  const uint32_t n = s.num_elements();
  const Eigen::MatrixXcd r2 = alg.raise_op * alg.raise_op;
  if (alg.d != 3 || alg.order != 3 || r2.norm() < 1e-12 ||
      (alg.raise_op * r2).norm() > 1e-12)
    throw std::invalid_argument("generating_function: unsupported algebra");
  for (uint32_t d : s.dims)
    if (d != alg.d)
      throw std::invalid_argument(
          "generating_function: element dimension must match the algebra");
  if (std::abs(s.amps[0]) < 1e-12 * std::sqrt(s.norm_sq()))
    throw DomainError("VACUUM_ZERO",
                      "reference amplitude too small to scale to 1");
  NilPoly F(std::vector<uint32_t>(n, alg.order - 1), MulRule::DegreeCapped);
  for (uint64_t m = 0; m < F.size(); ++m) {
    double fact = 1.0;
    uint64_t idx = 0;
    for (uint32_t i = 0; i < n; ++i) {
      const uint32_t k = F.exponent(m, i);
      idx += static_cast<uint64_t>(k) * s.stride(i);
      for (uint32_t j = 2; j <= k; ++j) fact *= j;
    }
    F[m] = s.amps[idx] / s.amps[0] / fact;
  }
  return F;
}

namespace {

// Spin-1 rotation whose reference row is the conjugated coherent-state
// vector for tau = tan(theta/2) e^{-i gamma}.
Eigen::MatrixXcd coherent_rotation(double theta, double gamma) {
  const double c = std::cos(theta / 2.0), sn = std::sin(theta / 2.0);
  const cplx eg = std::exp(kI * gamma);
  Eigen::MatrixXcd r(3, 3);
  r << c * c, std::sqrt(2.0) * c * sn / eg, sn * sn / (eg * eg),
      -std::sqrt(2.0) * c * sn * eg, c * c - sn * sn,
      std::sqrt(2.0) * c * sn / eg, sn * sn * eg * eg,
      -std::sqrt(2.0) * c * sn * eg, c * c;
  return r;
}

// Reference-population objective over coherent parameters:
// h = |w0 + sqrt(2) w1 tau + w2 tau^2|^2 / (1 + |tau|^2)^2.
double coherent_population(const std::array<cplx, 3>& w, cplx tau) {
  const cplx p = w[0] + std::sqrt(2.0) * w[1] * tau + w[2] * tau * tau;
  const double den = 1.0 + std::norm(tau);
  return std::norm(p) / (den * den);
}

// Conjugate-Wirtinger derivative of the objective; vanishes exactly at
// the optimal rotation.
cplx coherent_gradient(const std::array<cplx, 3>& w, cplx tau) {
  const cplx p = w[0] + std::sqrt(2.0) * w[1] * tau + w[2] * tau * tau;
  const cplx dp = std::sqrt(2.0) * w[1] + 2.0 * w[2] * tau;
  const double den = 1.0 + std::norm(tau);
  return p * std::conj(dp) / (den * den) -
         2.0 * tau * std::norm(p) / (den * den * den);
}

// Grid seed plus quasi-Newton polish of the two-angle maximization.
cplx best_coherent_tau(const std::array<cplx, 3>& w) {
  cplx best = 0.0;
  double hb = coherent_population(w, best);
  for (int it = 1; it < 24; ++it) {
    const double theta = M_PI * it / 24.0;
    for (int ig = 0; ig < 24; ++ig) {
      const double gamma = 2.0 * M_PI * ig / 24.0;
      const cplx tau = std::tan(theta / 2.0) * std::exp(-kI * gamma);
      const double h = coherent_population(w, tau);
      if (h > hb) {
        hb = h;
        best = tau;
      }
    }
  }
  cplx tau = best;
  for (int it = 0; it < 80; ++it) {
    const cplx g = coherent_gradient(w, tau);
    if (std::abs(g) < 1e-15) break;
    const double h = 1e-6 * (1.0 + std::abs(tau));
    const cplx gx = coherent_gradient(w, tau + h);
    const cplx gy = coherent_gradient(w, tau + h * kI);
    Eigen::Matrix2d jac;
    jac << (gx - g).real() / h, (gy - g).real() / h, (gx - g).imag() / h,
        (gy - g).imag() / h;
    Eigen::Vector2d rhs(-g.real(), -g.imag());
    Eigen::Vector2d step = jac.fullPivLu().solve(rhs);
    if (!step.allFinite()) break;
    cplx cand = tau + cplx(step(0), step(1));
    // Backtrack onto the ascent direction if the full step overshoots.
    for (int bt = 0; bt < 8 && coherent_population(w, cand) <
                                   coherent_population(w, tau);
         ++bt)
      cand = tau + (cand - tau) * 0.5;
    if (coherent_population(w, cand) < coherent_population(w, tau)) break;
    tau = cand;
  }
  return tau;
}

}  // namespace

Tanglemeter spin1_canonicalize(const StateVector& s0,
                               const CanonOptions& opt) {
  const uint32_t n = s0.num_elements();
  if (n < 1 || n > 2)
    throw std::invalid_argument("spin1_canonicalize: one or two elements");
  for (uint32_t d : s0.dims)
    if (d != 3)
      throw std::invalid_argument("spin1_canonicalize: qutrit elements only");
  StateVector s = s0;
  s.normalize();
  // The all-linear residual also vanishes at reference-population minima
  // (e.g. both elements in the middle level); kick such states with a
  // generic rotation so the ascent has somewhere to start.
  for (uint32_t attempt = 0; attempt < 4 && std::abs(s.amps[0]) < 1e-6;
       ++attempt)
    for (uint32_t i = 0; i < n; ++i)
      s = apply_matrix(s, i, coherent_rotation(1.0, 0.3 + i));
  uint32_t iter = 0;
  double residual = 0.0;
  for (;; ++iter) {
    if (iter > opt.max_iter)
      throw DomainError("NONCONVERGED",
                        "linear residual " + std::to_string(residual) +
                            " after max_iter sweeps");
    residual = 0.0;
    for (uint32_t i = 0; i < n; ++i)
      residual = std::max(residual, std::abs(s.amps[s.stride(i)]));
    if (residual < opt.tol) break;
    for (uint32_t i = 0; i < n; ++i) {
      const std::array<cplx, 3> w = {s.amps[0], s.amps[s.stride(i)],
                                     s.amps[2 * s.stride(i)]};
      const cplx tau = best_coherent_tau(w);
      if (std::abs(tau) < 1e-15) continue;
      s = apply_matrix(s, i,
                       coherent_rotation(2.0 * std::atan(std::abs(tau)),
                                         -std::arg(tau)));
    }
  }
  // Label-phase stage: make the per-element quadratic coefficients real
  // nonnegative.
  for (uint32_t i = 0; i < n; ++i) {
    const cplx q = s.amps[2 * s.stride(i)] / s.amps[0];
    if (std::abs(q) < 1e-12) continue;
    const double phi = -std::arg(q) / 2.0;
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(3, 3);
    for (uint32_t a = 0; a < 3; ++a)
      z(a, a) = std::exp(kI * phi * (static_cast<double>(a) - 1.0));
    s = apply_matrix(s, i, z);
  }
  Tanglemeter t;
  t.group = CanonGroup::SU;
  t.vacuum_factor = s.amps[0];
  t.poly = log_unit(generating_function(s, spin1_algebra()));
  t.poly[0] = 0.0;
  t.iterations = iter;
  t.residual = residual;
  return t;
}

}  // namespace npent
