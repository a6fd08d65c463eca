#include "npent/canon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "npent/error.hpp"

namespace npent {

namespace {
const cplx kI(0.0, 1.0);

NilPoly qubit_shape(uint32_t n) {
  return NilPoly(std::vector<uint32_t>(n, 1), MulRule::QubitSubset);
}

// exp(-i (Pm s+ + Pp s-)) for possibly non-conjugate Pm, Pp.
Eigen::Matrix2cd rotation_matrix(cplx pm, cplx pp) {
  cplx px = (pm + pp) / 2.0;
  cplx py = kI * (pm - pp) / 2.0;
  return su2_matrix({-px, -py, cplx(0.0)});
}

Eigen::Matrix2cd diag_scaling(cplx B) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::exp(-B);
  m(1, 1) = std::exp(B);
  return m;
}

void apply_op(StateVector& s, std::vector<LocalOp>& transform, uint32_t elem,
              const Eigen::Matrix2cd& m) {
  s = apply_matrix(s, elem, m);
  transform.push_back(make_local_op(elem, m));
}

double vacuum_fraction(const StateVector& s) {
  return std::norm(s.amps[0]) / s.norm_sq();
}

// Rotate the state until the vacuum amplitude is well away from zero.
void repair_vacuum(StateVector& s, std::vector<LocalOp>& transform,
                   uint32_t n) {
  if (vacuum_fraction(s) > 1e-4) return;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ n);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    StateVector trial = s;
    std::vector<Eigen::Matrix2cd> ops(n);
    for (uint32_t i = 0; i < n; ++i) {
      ops[i] = su2_matrix({g(rng), g(rng), g(rng)});
      trial = apply_matrix(trial, i, ops[i]);
    }
    if (vacuum_fraction(trial) > 1e-2) {
      for (uint32_t i = 0; i < n; ++i)
        transform.push_back(make_local_op(i, ops[i]));
      s = trial;
      return;
    }
  }
  throw DomainError("VACUUM_ZERO",
                    "could not rotate the state off the vacuum node");
}

std::vector<cplx> linear_coeffs(const NilPoly& f) {
  std::vector<cplx> b(f.num_elements());
  for (uint32_t i = 0; i < b.size(); ++i) b[i] = f[f.stride(i)];
  return b;
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

// One Euler step of the vacuum-maximizing unitary flow.
void su_euler_step(StateVector& s, std::vector<LocalOp>& transform,
                   const std::vector<cplx>& beta, double dt) {
  for (uint32_t i = 0; i < beta.size(); ++i) {
    cplx pm = -kI * beta[i] * dt;
    apply_op(s, transform, i, rotation_matrix(pm, std::conj(pm)));
  }
}

// Damped Newton step on the linear coefficients; returns the new residual.
double su_newton_step(StateVector& s, std::vector<LocalOp>& transform,
                      const NilPoly& f, double residual) {
  uint32_t n = f.num_elements();
  std::vector<cplx> beta = linear_coeffs(f);
  // First-order change of beta_j under exp(-i H_i) with H_i unitary:
  // beta_j - i Pm_j + sum_i conj(Pm_i) i (beta_j beta_i - beta_ij) = 0.
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd c(n);
  for (uint32_t j = 0; j < n; ++j) {
    A(j, j) = -kI;
    for (uint32_t i = 0; i < n; ++i) {
      if (i == j) continue;
      cplx bij = f[f.stride(i) + f.stride(j)];
      B(j, i) = kI * (beta[j] * beta[i] - bij);
    }
    c(j) = -beta[j];
  }
  Eigen::MatrixXd R(2 * n, 2 * n);
  R << (A + B).real(), -(A - B).imag(), (A + B).imag(), (A - B).real();
  Eigen::VectorXd rhs(2 * n);
  rhs << c.real(), c.imag();
  Eigen::VectorXd uv = R.colPivHouseholderQr().solve(rhs);
  std::vector<cplx> pm(n);
  for (uint32_t i = 0; i < n; ++i) pm[i] = cplx(uv(i), uv(n + i));
  double lambda = 1.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    StateVector trial = s;
    std::vector<LocalOp> ops;
    for (uint32_t i = 0; i < n; ++i) {
      cplx p = lambda * pm[i];
      apply_op(trial, ops, i, rotation_matrix(p, std::conj(p)));
    }
    double nr = max_abs(linear_coeffs(nilpotential(trial)));
    if (nr < residual) {
      s = trial;
      transform.insert(transform.end(), ops.begin(), ops.end());
      return nr;
    }
    lambda /= 2.0;
  }
  su_euler_step(s, transform, beta, 0.1);
  return max_abs(linear_coeffs(nilpotential(s)));
}

// Phase stage: the n coefficients of the order-(n-1) monomials are made
// real positive; degenerate supports fall back to a greedy rank-building
// choice over the largest-modulus coefficients.
void fix_phases(StateVector& s, std::vector<LocalOp>& transform) {
  uint32_t n = s.num_elements();
  NilPoly f = nilpotential(s);
  uint64_t full = f.size() - 1;
  std::vector<double> theta(n, 0.0);
  std::vector<cplx> c(n);
  bool regular = true;
  for (uint32_t i = 0; i < n; ++i) {
    c[i] = f[full ^ f.stride(i)];
    if (std::abs(c[i]) < 1e-8) regular = false;
  }
  if (regular && n >= 2) {
    double big = 0.0;
    for (uint32_t i = 0; i < n; ++i) big -= std::arg(c[i]);
    big /= static_cast<double>(n - 1);
    for (uint32_t i = 0; i < n; ++i) theta[i] = std::arg(c[i]) + big;
  } else {
    // Greedy: monomials by modulus descending, keep rank-increasing
    // constraints sum_{i in m} theta_i = -arg(c_m), minimum-norm solve.
    std::vector<uint64_t> order;
    for (uint64_t m = 1; m < f.size(); ++m)
      if (std::abs(f[m]) > 1e-10) order.push_back(m);
    std::sort(order.begin(), order.end(), [&](uint64_t a, uint64_t b) {
      double da = std::abs(f[a]), db = std::abs(f[b]);
      return da != db ? da > db : a < b;
    });
    Eigen::MatrixXd rows(0, n);
    Eigen::VectorXd vals(0);
    for (uint64_t m : order) {
      if (rows.rows() == n) break;
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
      for (uint32_t i = 0; i < n; ++i)
        if (m & f.stride(i)) r(i) = 1.0;
      Eigen::MatrixXd cand(rows.rows() + 1, n);
      cand << rows, r;
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
      for (uint32_t i = 0; i < n; ++i) theta[i] = t(i);
    }
  }
  // The convention leaves a residual shift theta_i += k * 2pi/(n-1) that
  // preserves every order-(n-1) coefficient while rotating the others;
  // resolve it by maximizing the real part (then imaginary part) of the
  // largest affected coefficient.
  if (n >= 3) {
    const double delta = 2.0 * M_PI / static_cast<double>(n - 1);
    uint64_t mstar = 0;
    double mag = 1e-10;
    for (uint64_t m = 1; m < f.size(); ++m) {
      uint32_t count = 0;
      for (uint32_t i = 0; i < n; ++i)
        if (m & f.stride(i)) ++count;
      if (count % (n - 1) != 0 && std::abs(f[m]) > mag) {
        mag = std::abs(f[m]);
        mstar = m;
      }
    }
    if (mstar) {
      uint32_t count = 0;
      double base = 0.0;
      for (uint32_t i = 0; i < n; ++i)
        if (mstar & f.stride(i)) {
          ++count;
          base += theta[i];
        }
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
      for (uint32_t i = 0; i < n; ++i) theta[i] += kbest * delta;
    }
  }
  for (uint32_t i = 0; i < n; ++i) {
    Eigen::Matrix2cd z = Eigen::Matrix2cd::Zero();
    z(0, 0) = std::exp(-kI * theta[i] / 2.0);
    z(1, 1) = std::exp(kI * theta[i] / 2.0);
    apply_op(s, transform, i, z);
  }
}

Tanglemeter finish_su(StateVector& s, std::vector<LocalOp>&& transform,
                      uint32_t iterations, double residual) {
  Tanglemeter t;
  t.group = CanonGroup::SU;
  t.transform = std::move(transform);
  t.vacuum_factor = s.amps[0];
  t.poly = nilpotential(s);
  t.poly[0] = 0.0;
  t.iterations = iterations;
  t.residual = residual;
  return t;
}

struct FlowRun {
  StateVector s;
  std::vector<LocalOp> transform;
  uint32_t iterations = 0;
  double residual = 0.0;
};

// Run the vacuum-maximizing flow to convergence from the given start.
FlowRun run_su_flow(StateVector s, std::vector<LocalOp> transform,
                    const CanonOptions& opt) {
  FlowRun run;
  double residual = 0.0;
  uint32_t iter = 0;
  for (;; ++iter) {
    if (iter > opt.max_iter)
      throw DomainError("NONCONVERGED",
                        "linear residual " + std::to_string(residual) +
                            " after max_iter flow steps");
    NilPoly f = nilpotential(s);
    std::vector<cplx> beta = linear_coeffs(f);
    residual = max_abs(beta);
    if (residual < opt.tol) break;
    if (residual < opt.newton_threshold)
      residual = su_newton_step(s, transform, f, residual);
    else
      su_euler_step(s, transform, beta, opt.dt);
  }
  run.s = std::move(s);
  run.transform = std::move(transform);
  run.iterations = iter;
  run.residual = residual;
  return run;
}

}  // namespace

Tanglemeter su_canonicalize(const StateVector& s0, const CanonOptions& opt) {
  if (!s0.is_qubit_assembly())
    throw std::invalid_argument("su_canonicalize: qubit assembly required");
  StateVector s = s0;
  s.normalize();
  std::vector<LocalOp> transform;
  const uint32_t n = s.num_elements();
  repair_vacuum(s, transform, n);

  // The flow is a local ascent of the vacuum population, so strongly
  // entangled states can offer several basins.  Screen a deterministic set
  // of random local-unitary starts by their immediate vacuum population,
  // flow from the most promising ones, and keep the best converged run;
  // the plain start wins ties so weakly entangled states are untouched.
  bool have_best = false;
  FlowRun best;
  std::exception_ptr first_error;
  auto consider = [&](const StateVector& start,
                      const std::vector<LocalOp>& ops) {
    try {
      FlowRun run = run_su_flow(start, ops, opt);
      if (!have_best ||
          std::abs(run.s.amps[0]) > std::abs(best.s.amps[0]) + 1e-9) {
        best = std::move(run);
        have_best = true;
      }
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
    }
  };
  consider(s, transform);

  std::mt19937_64 rng(0x5bd1e995u);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::pair<double, std::vector<Eigen::Matrix2cd>>> screened;
  for (uint32_t k = 0; k < 16 * opt.restarts; ++k) {
    std::vector<Eigen::Matrix2cd> ms(n);
    StateVector t = s;
    for (uint32_t i = 0; i < n; ++i) {
      ms[i] = su2_matrix({cplx(g(rng), 0.0), cplx(g(rng), 0.0),
                          cplx(g(rng), 0.0)});
      t = apply_matrix(t, i, ms[i]);
    }
    screened.emplace_back(std::abs(t.amps[0]), std::move(ms));
  }
  std::sort(screened.begin(), screened.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  for (size_t k = 0; k < screened.size() && k < opt.restarts; ++k) {
    StateVector t = s;
    std::vector<LocalOp> ops = transform;
    for (uint32_t i = 0; i < n; ++i)
      apply_op(t, ops, i, screened[k].second[i]);
    consider(t, ops);
  }
  if (!have_best) std::rethrow_exception(first_error);

  fix_phases(best.s, best.transform);
  return finish_su(best.s, std::move(best.transform), best.iterations,
                   best.residual);
}

Eigen::Matrix4cd elimination_matrix(const NilPoly& f) {
  if (f.num_elements() != 4 || !f.all_qubit())
    throw std::invalid_argument("elimination_matrix: 4 qubits required");
  cplx b3 = f[3], b5 = f[5], b6 = f[6], b9 = f[9], b10 = f[10], b12 = f[12],
       b15 = f[15];
  Eigen::Matrix4cd m;
  m << -b15, 2.0 * b6 * b10, 2.0 * b6 * b12, 2.0 * b10 * b12,
      2.0 * b5 * b9, -b15, 2.0 * b5 * b12, 2.0 * b9 * b12,
      2.0 * b3 * b9, 2.0 * b3 * b10, -b15, 2.0 * b9 * b10,
      2.0 * b3 * b5, 2.0 * b3 * b6, 2.0 * b5 * b6, -b15;
  return m;
}

std::array<cplx, 4> gamma_eigenvalues(const NilPoly& f) {
  cplx b3 = f[3], b5 = f[5], b6 = f[6], b9 = f[9], b10 = f[10], b12 = f[12],
       b15 = f[15];
  cplx r1 = std::sqrt(b5 * b6 * b9 * b10);
  cplx r2 = std::sqrt(b3 * b6 * b9 * b12);
  cplx r3 = std::sqrt(b3 * b5 * b10 * b12);
  // The closed form is branch-ambiguous; pick the branch signs whose four
  // values best match the numerically computed spectrum of the matrix.
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(-elimination_matrix(f));
  std::array<cplx, 4> best{};
  double best_cost = std::numeric_limits<double>::infinity();
  for (int s1 = -1; s1 <= 1; s1 += 2)
    for (int s2 = -1; s2 <= 1; s2 += 2)
      for (int s3 = -1; s3 <= 1; s3 += 2) {
        cplx a = 2.0 * double(s1) * r1, b = 2.0 * double(s2) * r2,
             c = 2.0 * double(s3) * r3;
        std::array<cplx, 4> g = {b15 - a + b - c, b15 + a - b - c,
                                 b15 - a - b + c, b15 + a + b + c};
        // Greedy bipartite match against the spectrum.
        std::array<bool, 4> used{};
        double cost = 0.0;
        for (int k = 0; k < 4; ++k) {
          double dmin = std::numeric_limits<double>::infinity();
          int jmin = -1;
          for (int j = 0; j < 4; ++j) {
            if (used[j]) continue;
            double d = std::abs(g[k] - es.eigenvalues()(j));
            if (d < dmin) {
              dmin = d;
              jmin = j;
            }
          }
          used[jmin] = true;
          cost += dmin;
        }
        if (cost < best_cost) {
          best_cost = cost;
          best = g;
        }
      }
  return best;
}

namespace {

int count_gamma_zeros(const std::array<cplx, 4>& g, double tol) {
  int zeros = 0;
  for (const auto& x : g)
    if (std::abs(x) < tol) ++zeros;
  return zeros;
}

// ---------------------------------------------------------------------------
// SL elimination flow: kill the order-(n-1) monomials while keeping the
// linear coefficients at zero, using the exact first-order response of
// ln F to exp(-i(Pm s+ + Pp s-)) per element.

struct SlStepResult {
  double high_residual;
  bool stalled;
};

std::vector<uint64_t> high_masks(const NilPoly& f) {
  uint64_t full = f.size() - 1;
  std::vector<uint64_t> m;
  for (uint32_t j = 0; j < f.num_elements(); ++j)
    m.push_back(full ^ f.stride(j));
  return m;
}

double high_residual(const NilPoly& f) {
  double r = 0.0;
  for (uint64_t m : high_masks(f)) r = std::max(r, std::abs(f[m]));
  return r;
}

void sl_step(StateVector& s, std::vector<LocalOp>& transform,
             const CanonOptions& opt) {
  uint32_t n = s.num_elements();
  NilPoly F = to_poly(s);
  NilPoly invF = inv_unit(F);
  NilPoly f = log_unit(F);
  std::vector<uint64_t> highs = high_masks(f);
  double res = high_residual(f);
  double step = res < opt.newton_threshold ? 1.0 : opt.dt;
  // Response columns: Pm_i contributes -i s_i only; Pp_i contributes
  // -i (dF/ds_i) / F.
  std::vector<NilPoly> colp;
  for (uint32_t i = 0; i < n; ++i)
    colp.push_back(mul(partial(F, i), invF) * (-kI));
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  Eigen::VectorXcd rhs(2 * n);
  for (uint32_t j = 0; j < n; ++j) {
    uint64_t lin = f.stride(j);
    A(j, j) = -kI;
    for (uint32_t i = 0; i < n; ++i) A(j, n + i) = colp[i][lin];
    rhs(j) = -f[lin];
    for (uint32_t i = 0; i < n; ++i) A(n + j, n + i) = colp[i][highs[j]];
    rhs(n + j) = -step * f[highs[j]];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(opt.det_tol);
  Eigen::VectorXcd x = svd.solve(rhs);
  for (uint32_t i = 0; i < n; ++i)
    apply_op(s, transform, i, rotation_matrix(x(i), x(n + i)));
}

// Run the elimination flow until the order-(n-1) residual converges or
// stalls on an uncontrollable combination.
SlStepResult sl_flow(StateVector& s, std::vector<LocalOp>& transform,
                     const CanonOptions& opt, uint32_t& iterations) {
  double best = high_residual(nilpotential(s));
  uint32_t since_improvement = 0;
  for (uint32_t it = 0; it < opt.max_iter; ++it) {
    double res = high_residual(nilpotential(s));
    if (res < opt.tol) return {res, false};
    sl_step(s, transform, opt);
    ++iterations;
    double after = high_residual(nilpotential(s));
    if (after < best * 0.999) {
      best = after;
      since_improvement = 0;
    } else if (++since_improvement > 100) {
      return {after, true};
    }
  }
  return {high_residual(nilpotential(s)), true};
}

// ---------------------------------------------------------------------------
// Scaling stage: diagonal determinant-1 maps exp(B_i sz).  Conditions are
// collected highest degree first (unit top coefficients, then equality of
// complementary bilinear pairs, then unit bilinears) while they increase
// the rank of the linear system in l_i = 2 B_i.

void apply_scaling(StateVector& s, std::vector<LocalOp>& transform,
                   const Eigen::VectorXcd& l) {
  for (uint32_t i = 0; i < s.num_elements(); ++i)
    apply_op(s, transform, i, diag_scaling(l(i) / 2.0));
}

void scaling_stage(StateVector& s, std::vector<LocalOp>& transform,
                   const CanonOptions& opt) {
  uint32_t n = s.num_elements();
  NilPoly f = nilpotential(s);
  double scale = f.max_abs();
  if (scale < opt.class_tol) return;
  struct Cond {
    Eigen::RowVectorXd row;
    cplx val;
  };
  std::vector<Cond> conds;
  Eigen::MatrixXd accepted(0, n);
  auto try_add = [&](const Eigen::RowVectorXd& r, cplx v) {
    if (accepted.rows() == n) return;
    Eigen::MatrixXd cand(accepted.rows() + 1, n);
    cand << accepted, r;
    if (cand.colPivHouseholderQr().rank() > accepted.rows()) {
      accepted = cand;
      conds.push_back({r, v});
    }
  };
  auto mask_row = [&](uint64_t m) {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
    for (uint32_t i = 0; i < n; ++i)
      if (m & f.stride(i)) r(i) = 1.0;
    return r;
  };
  // Unit conditions for degrees n down to 3, largest modulus first.
  for (uint32_t deg = n; deg >= 3; --deg) {
    std::vector<uint64_t> masks;
    for (uint64_t m = 0; m < f.size(); ++m)
      if (f.total_degree(m) == deg && std::abs(f[m]) > opt.class_tol * scale)
        masks.push_back(m);
    std::sort(masks.begin(), masks.end(), [&](uint64_t a, uint64_t b) {
      double da = std::abs(f[a]), db = std::abs(f[b]);
      return da != db ? da > db : a < b;
    });
    for (uint64_t m : masks) try_add(mask_row(m), -std::log(f[m]));
  }
  // Complementary bilinear pairs set equal.
  uint64_t full = f.size() - 1;
  for (uint64_t m = 0; m < f.size(); ++m) {
    uint64_t c = full ^ m;
    if (f.total_degree(m) != 2 || f.total_degree(c) != 2 || m >= c) continue;
    if (std::abs(f[m]) > opt.class_tol * scale &&
        std::abs(f[c]) > opt.class_tol * scale)
      try_add(mask_row(m) - mask_row(c), std::log(f[c]) - std::log(f[m]));
  }
  // Remaining bilinears to unity.
  std::vector<uint64_t> bis;
  for (uint64_t m = 0; m < f.size(); ++m)
    if (f.total_degree(m) == 2 && std::abs(f[m]) > opt.class_tol * scale)
      bis.push_back(m);
  std::sort(bis.begin(), bis.end(), [&](uint64_t a, uint64_t b) {
    double da = std::abs(f[a]), db = std::abs(f[b]);
    return da != db ? da > db : a < b;
  });
  for (uint64_t m : bis) try_add(mask_row(m), -std::log(f[m]));
  if (conds.empty()) return;
  Eigen::MatrixXcd M(conds.size(), n);
  Eigen::VectorXcd v(conds.size());
  for (size_t k = 0; k < conds.size(); ++k) {
    M.row(k) = conds[k].row.cast<cplx>();
    v(k) = conds[k].val;
  }
  Eigen::VectorXcd l =
      M.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(v);
  apply_scaling(s, transform, l);
}

// ---------------------------------------------------------------------------
// Class table for four qubits: support patterns modulo qubit permutation.

uint32_t support_word(const NilPoly& f, double tol) {
  double scale = std::max(f.max_abs(), 1e-12);
  uint32_t w = 0;
  for (uint64_t m = 0; m < f.size(); ++m)
    if (f.total_degree(m) >= 2 && std::abs(f[m]) > tol * scale)
      w |= 1u << m;
  return w;
}

uint32_t permute_word(uint32_t w, const std::array<uint32_t, 4>& p) {
  uint32_t out = 0;
  for (uint32_t m = 0; m < 16; ++m) {
    if (!(w & (1u << m))) continue;
    uint32_t pm = 0;
    for (uint32_t b = 0; b < 4; ++b)
      if (m & (1u << b)) pm |= 1u << p[b];
    out |= 1u << pm;
  }
  return out;
}

uint32_t canonical_word(uint32_t w) {
  std::array<uint32_t, 4> p = {0, 1, 2, 3};
  uint32_t best = ~0u;
  do {
    best = std::min(best, permute_word(w, p));
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

uint32_t word_of(std::initializer_list<uint32_t> masks) {
  uint32_t w = 0;
  for (uint32_t m : masks) w |= 1u << m;
  return canonical_word(w);
}

struct ClassRow {
  const char* name;
  uint32_t word;
};

const std::vector<ClassRow>& class_table() {
  static const std::vector<ClassRow> table = {
      {"G_a", word_of({3, 5, 6, 9, 10, 12, 15})},
      {"G_bcd", word_of({3, 5, 6, 9, 10, 12, 7, 11, 13, 14, 15})},
      {"G_bcd", word_of({3, 5, 6, 9, 10, 12, 7, 11, 13, 14})},
      {"G_e", word_of({3, 5, 6, 7, 11, 13, 14})},
      {"LG2_a", word_of({5, 6, 9, 10, 12, 15})},
      {"LG2_b", word_of({3, 5, 6, 9, 10, 12})},
      {"LG2_c", word_of({3, 5, 6, 11, 13, 14})},
      {"LG1_a", word_of({3, 5, 6, 9, 15})},
      {"LG1_b", word_of({3, 5, 6, 11, 14})},
      {"S_a", word_of({7, 13, 10})},
      {"S_b", word_of({7, 11, 13})},
      {"S_c", word_of({7, 13})},
      {"S_d", word_of({7})},
      {"S_e", word_of({5, 6, 12, 15})},
      {"S_f", word_of({3, 5, 6, 15})},
      {"W", word_of({5, 6, 12})},
      {"separable-triangle", word_of({6, 10, 12})},
      {"two-bell", word_of({3, 12})},
      {"GHZ4", word_of({15})},
      {"biseparable", word_of({3})},
      {"product", 0},
  };
  return table;
}

std::string match4(const NilPoly& f, int zeros, double tol) {
  uint32_t w = canonical_word(support_word(f, tol));
  for (const auto& row : class_table()) {
    if (row.word != w) continue;
    if (std::string(row.name) == "G_bcd") {
      // Full bilinear+cubic support is a class only when the elimination
      // system is actually degenerate; otherwise the cubics are removable
      // and the support match is incidental.
      if (zeros == 1) return "G_b";
      if (zeros == 2) return "G_c";
      if (zeros == 3) return "G_d";
      continue;
    }
    return row.name;
  }
  return "";
}

std::vector<cplx> collect_params(const NilPoly& f, double tol) {
  double scale = std::max(f.max_abs(), 1e-12);
  std::vector<cplx> p;
  for (uint64_t m = 0; m < f.size(); ++m)
    if (f.total_degree(m) >= 2 && std::abs(f[m]) > tol * scale)
      p.push_back(f[m]);
  return p;
}

NilPoly state_poly(const StateVector& s) {
  NilPoly f = nilpotential(s);
  f[0] = 0.0;
  return f;
}

Tanglemeter finish_sl(const StateVector& s, std::vector<LocalOp>&& transform,
                      CanonGroup group, uint32_t iterations, double residual) {
  Tanglemeter t;
  t.group = group;
  t.transform = std::move(transform);
  t.vacuum_factor = s.amps[0];
  t.poly = state_poly(s);
  t.iterations = iterations;
  t.residual = residual;
  return t;
}

// Classify a four-qubit nilpotential that collapsed under the elimination
// flow.  Only the direction of collapse is meaningful; its support decides
// the class.  A direction with every bilinear present belongs to the class
// of the W state, whose representative is the three-bilinear star reached
// in the limit of extreme scalings.
ClassLabel match_collapsed(const NilPoly& f, const CanonOptions& opt) {
  ClassLabel label;
  double scale = f.max_abs();
  NilPoly form(std::vector<uint32_t>(4, 1), MulRule::QubitSubset);
  if (scale < 1e-14) {
    label.name = "product";
    label.canonic_form = form;
    return label;
  }
  uint32_t bis = 0;
  double worst = 0.0;
  for (uint64_t m = 0; m < f.size(); ++m) {
    if (std::abs(f[m]) < 0.05 * scale) continue;
    if (f.total_degree(m) == 2)
      bis |= 1u << m;
    else
      worst = std::max(worst, std::abs(f[m]));
  }
  if (worst < 0.05 * scale && bis == 0x1668u) {  // all six bilinears
    label.name = "W";
    form[5] = form[6] = form[12] = 1.0;
    label.canonic_form = form;
    return label;
  }
  if (worst < 0.05 * scale) {
    uint32_t w = canonical_word(bis);
    for (const auto& row : class_table())
      if (row.word == w) {
        label.name = row.name;
        label.canonic_form = f * (1.0 / scale);
        return label;
      }
  }
  label.name = "null-cone";
  label.canonic_form = f * (1.0 / scale);
  return label;
}

double three_tangle_beta(const NilPoly& f) {
  cplx num = f[7] * f[7] + 4.0 * f[3] * f[5] * f[6];
  double n2 = 1.0 + std::norm(f[3]) + std::norm(f[5]) + std::norm(f[6]) +
              std::norm(f[7]);
  return 4.0 * std::abs(num) / (n2 * n2);
}

}  // namespace

std::pair<Tanglemeter, ClassLabel> sl_canonicalize(const StateVector& s0,
                                                   const CanonOptions& opt) {
  uint32_t n = s0.num_elements();
  if (n < 2 || n > 4)
    throw std::invalid_argument("sl_canonicalize: 2 to 4 qubits supported");
  // The elimination stage and the pattern tables are defined relative to
  // the ascent from the given state, so keep the unitary stage single-start.
  CanonOptions su_opt = opt;
  su_opt.restarts = 0;
  Tanglemeter su = su_canonicalize(s0, su_opt);
  StateVector s = s0;
  s.normalize();
  for (const auto& op : su.transform) s = apply_matrix(s, op.element, op.matrix);
  uint32_t iterations = su.iterations;
  std::vector<LocalOp> transform = su.transform;
  ClassLabel label;

  if (n == 2) {
    NilPoly f = state_poly(s);
    if (std::abs(f[3]) > opt.class_tol) {
      Eigen::VectorXcd l(2);
      l(0) = l(1) = -std::log(f[3]) / 2.0;
      apply_scaling(s, transform, l);
      label.name = "Bell";
    } else {
      label.name = "product";
    }
    label.canonic_form = state_poly(s);
    label.params = collect_params(label.canonic_form, opt.class_tol);
    return {finish_sl(s, std::move(transform), CanonGroup::SL, iterations,
                      high_residual(label.canonic_form)),
            label};
  }

  if (n == 3) {
    NilPoly f = state_poly(s);
    if (three_tangle_beta(f) > opt.class_tol) {
      SlStepResult r = sl_flow(s, transform, opt, iterations);
      scaling_stage(s, transform, opt);
      label.name = "GHZ-generic";
      label.canonic_form = state_poly(s);
      label.params = collect_params(label.canonic_form, opt.class_tol);
      return {finish_sl(s, std::move(transform), CanonGroup::SL, iterations,
                        r.high_residual),
              label};
    }
    ClassLabel c3 = classify3(s0, opt);
    return {finish_sl(s, std::move(transform), CanonGroup::SU, iterations,
                      su.residual),
            c3};
  }

  // n == 4
  NilPoly f = state_poly(s);
  std::array<cplx, 4> g = gamma_eigenvalues(f);
  int zeros = count_gamma_zeros(g, opt.det_tol);
  label.gamma_zero_count = zeros;
  label.params.assign(g.begin(), g.end());
  if (zeros == 0) {
    if (std::abs(g[0] * g[1] * g[2] * g[3]) < opt.det_tol)
      throw DomainError("ILL_CONDITIONED",
                        "elimination determinant is near zero but no "
                        "eigenvalue cleanly vanishes");
    double pre_scale = f.max_abs();
    SlStepResult r = sl_flow(s, transform, opt, iterations);
    NilPoly out = state_poly(s);
    if (out.max_abs() < 1e-2 * pre_scale) {
      // The flow escaped to infinity in the group: every coefficient decays
      // together, which happens exactly for states all of whose polynomial
      // invariants vanish.  Classify by the direction of collapse, whose
      // scaling limit is the class representative.
      label = match_collapsed(out, opt);
      return {finish_sl(s, std::move(transform), CanonGroup::SL, iterations,
                        r.high_residual),
              label};
    }
    scaling_stage(s, transform, opt);
    out = state_poly(s);
    label.name = match4(out, zeros, opt.class_tol);
    if (label.name.empty()) label.name = "generic-unmatched";
    label.canonic_form = out;
    label.params = collect_params(out, opt.class_tol);
    return {finish_sl(s, std::move(transform), CanonGroup::SL, iterations,
                      r.high_residual),
            label};
  }
  // Singular branch: match the unitary canonic support directly; when it is
  // not of a tabulated shape, eliminate the reachable part and rescale.
  std::string name = match4(f, zeros, opt.class_tol);
  if (!name.empty() && name != "G_bcd") {
    label.name = name;
    label.canonic_form = f;
    label.params = collect_params(f, opt.class_tol);
    return {finish_sl(s, std::move(transform), CanonGroup::SU, iterations,
                      su.residual),
            label};
  }
  SlStepResult r = sl_flow(s, transform, opt, iterations);
  scaling_stage(s, transform, opt);
  NilPoly out = state_poly(s);
  name = match4(out, zeros, opt.class_tol);
  if (name.empty()) name = "singular-" + std::to_string(zeros);
  label.name = name;
  label.canonic_form = out;
  label.params = collect_params(out, opt.class_tol);
  return {finish_sl(s, std::move(transform), CanonGroup::SU, iterations,
                    r.high_residual),
          label};
}

ClassLabel classify3(const StateVector& s0, const CanonOptions& opt) {
  if (s0.num_elements() != 3 || !s0.is_qubit_assembly())
    throw std::invalid_argument("classify3: 3 qubits required");
  Tanglemeter t = su_canonicalize(s0, opt);
  const NilPoly& f = t.poly;
  ClassLabel label;
  label.canonic_form = f;
  double tau = three_tangle_beta(f);
  if (tau > 0.5 * opt.class_tol && tau < 2.0 * opt.class_tol)
    throw DomainError("AMBIGUOUS",
                      "3-tangle at the classification threshold");
  if (tau > opt.class_tol) {
    label.name = "GHZ-generic";
    label.params = {f[7]};
    return label;
  }
  std::vector<uint64_t> bis;
  for (uint64_t m : {3ull, 5ull, 6ull})
    if (std::abs(f[m]) > opt.class_tol) bis.push_back(m);
  for (uint64_t m : bis) label.params.push_back(f[m]);
  switch (bis.size()) {
    case 3:
      label.name = "W";
      break;
    case 2: {
      // Shared qubit of the two bilinears (1-based).
      uint64_t shared = bis[0] & bis[1];
      uint32_t q = shared == 1 ? 1 : (shared == 2 ? 2 : 3);
      label.name = "singular-" + std::to_string(q);
      break;
    }
    case 1:
      label.name = "biseparable";
      break;
    default:
      label.name = "product";
      break;
  }
  return label;
}

namespace {

Eigen::MatrixXd real_columns(const std::vector<Eigen::VectorXcd>& cols) {
  Eigen::MatrixXd M(2 * cols.front().size(), cols.size());
  for (size_t k = 0; k < cols.size(); ++k) {
    M.block(0, k, cols[k].size(), 1) = cols[k].real();
    M.block(cols[k].size(), k, cols[k].size(), 1) = cols[k].imag();
  }
  return M;
}

uint32_t matrix_rank(const Eigen::MatrixXd& M, double tol) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
  double thresh = tol * std::max(1.0, svd.singularValues()(0));
  uint32_t r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thresh) ++r;
  return r;
}

std::vector<Eigen::VectorXcd> pauli_directions(const StateVector& s) {
  uint32_t n = s.num_elements();
  std::vector<Eigen::VectorXcd> cols;
  std::array<Eigen::Matrix2cd, 3> sig = {pauli_x(), pauli_y(), pauli_z()};
  for (uint32_t i = 0; i < n; ++i)
    for (const auto& m : sig) {
      StateVector d = apply_matrix(s, i, m);
      Eigen::VectorXcd v(s.dim());
      for (uint64_t k = 0; k < s.dim(); ++k) v(k) = d.amps[k];
      cols.push_back(v);
    }
  return cols;
}

}  // namespace

uint32_t stabilizer_dimension(const StateVector& s0, double tol) {
  StateVector s = s0;
  s.normalize();
  std::vector<Eigen::VectorXcd> cols = pauli_directions(s);
  for (auto& v : cols) v *= kI;
  Eigen::MatrixXd M = real_columns(cols);
  return static_cast<uint32_t>(cols.size()) - matrix_rank(M, tol);
}

uint32_t orbit_coset_dimension(const StateVector& s0, CanonGroup group,
                               double tol) {
  StateVector s = s0;
  s.normalize();
  Eigen::VectorXcd psi(s.dim());
  for (uint64_t k = 0; k < s.dim(); ++k) psi(k) = s.amps[k];
  std::vector<Eigen::VectorXcd> cols = pauli_directions(s);
  std::vector<Eigen::VectorXcd> all;
  for (const auto& v : cols) {
    all.push_back(kI * v);
    if (group == CanonGroup::SL) all.push_back(v);
  }
  all.push_back(psi);
  all.push_back(kI * psi);
  Eigen::MatrixXd M = real_columns(all);
  uint32_t total = static_cast<uint32_t>(2 * s.dim());
  return total - matrix_rank(M, tol);
}

}  // namespace npent
