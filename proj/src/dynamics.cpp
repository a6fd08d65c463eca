#include "npent/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "npent/error.hpp"

namespace npent {

namespace {
const cplx kI(0.0, 1.0);

NilPoly generator_poly(const NilPoly& like, uint32_t elem) {
  NilPoly g(like.caps(), like.rule());
  g[like.stride(elem)] = 1.0;
  return g;
}

void check_symmetric(const Eigen::MatrixXd& g, uint32_t n) {
  if (g.size() == 0) return;
  if (g.rows() != n || g.cols() != n)
    throw std::invalid_argument("coupling matrix size mismatch");
  for (uint32_t i = 0; i < n; ++i) {
    if (g(i, i) != 0.0)
      throw std::invalid_argument("coupling matrix must have zero diagonal");
    for (uint32_t j = 0; j < n; ++j)
      if (g(i, j) != g(j, i))
        throw std::invalid_argument("coupling matrix must be symmetric");
  }
}
}  // namespace

HamiltonianSpec make_local_hamiltonian(
    uint32_t n, std::function<std::array<cplx, 3>(uint32_t, double)> local) {
  HamiltonianSpec H;
  H.family = HamiltonianFamily::Local;
  H.n = n;
  H.local = std::move(local);
  return H;
}

HamiltonianSpec make_xy_hamiltonian(
    uint32_t n, std::function<std::array<cplx, 3>(uint32_t, double)> local,
    Eigen::MatrixXd g) {
  check_symmetric(g, n);
  HamiltonianSpec H;
  H.family = HamiltonianFamily::XYUniversal;
  H.n = n;
  H.local = std::move(local);
  H.g_pm = std::move(g);
  return H;
}

std::vector<HamTerm> hamiltonian_terms(const HamiltonianSpec& H, double t) {
  std::vector<HamTerm> terms;
  for (uint32_t i = 0; i < H.n; ++i) {
    std::array<cplx, 3> P = H.local ? H.local(i, t)
                                    : std::array<cplx, 3>{0.0, 0.0, 0.0};
    cplx pminus = P[0] - kI * P[1];  // multiplies the raising operator
    cplx pplus = P[0] + kI * P[1];
    if (pminus != 0.0) terms.push_back({pminus, {{i, 'p'}}});
    if (pplus != 0.0) terms.push_back({pplus, {{i, 'm'}}});
    if (P[2] != 0.0) terms.push_back({P[2], {{i, 'z'}}});
  }
  auto add_pair = [&](const Eigen::MatrixXd& g, auto&& emit) {
    if (g.size() == 0) return;
    for (uint32_t i = 0; i < H.n; ++i)
      for (uint32_t j = i + 1; j < H.n; ++j)
        if (g(i, j) != 0.0) emit(i, j, g(i, j));
  };
  add_pair(H.g_pm, [&](uint32_t i, uint32_t j, double g) {
    terms.push_back({g, {{i, 'p'}, {j, 'm'}}});
    terms.push_back({g, {{i, 'm'}, {j, 'p'}}});
  });
  if (H.family == HamiltonianFamily::Spherical) {
    add_pair(H.g_zz, [&](uint32_t i, uint32_t j, double g) {
      terms.push_back({g, {{i, 'z'}, {j, 'z'}}});
    });
    add_pair(H.g_pp, [&](uint32_t i, uint32_t j, double g) {
      terms.push_back({g, {{i, 'p'}, {j, 'p'}}});
      terms.push_back({g, {{i, 'm'}, {j, 'm'}}});
    });
  }
  return terms;
}

NilPoly apply_operator_terms(const std::vector<HamTerm>& terms,
                             const NilPoly& F) {
  NilPoly out(F.caps(), F.rule());
  for (const auto& term : terms) {
    NilPoly acc = F;
    for (const auto& [elem, kind] : term.factors) {
      switch (kind) {
        case 'p':
          acc = mul(generator_poly(F, elem), acc);
          break;
        case 'm':
          acc = partial(acc, elem);
          break;
        case 'z':
          acc = mul(generator_poly(F, elem), partial(acc, elem)) * 2.0 - acc;
          break;
        default:
          throw std::invalid_argument("unknown operator kind");
      }
    }
    out += acc * term.coeff;
  }
  return out;
}

StateVector apply_operator_terms(const std::vector<HamTerm>& terms,
                                 const StateVector& s) {
  StateVector out = s;
  for (auto& a : out.amps) a = 0.0;
  for (const auto& term : terms) {
    StateVector acc = s;
    for (const auto& [elem, kind] : term.factors) {
      StateVector next = acc;
      uint64_t st = acc.stride(elem);
      for (uint64_t m = 0; m < acc.amps.size(); ++m) {
        bool up = acc.level(m, elem) == 1;
        switch (kind) {
          case 'p':
            next.amps[m] = up ? acc.amps[m - st] : 0.0;
            break;
          case 'm':
            next.amps[m] = up ? 0.0 : acc.amps[m + st];
            break;
          case 'z':
            next.amps[m] = (up ? 1.0 : -1.0) * acc.amps[m];
            break;
          default:
            throw std::invalid_argument("unknown operator kind");
        }
      }
      acc = next;
    }
    for (uint64_t m = 0; m < s.amps.size(); ++m)
      out.amps[m] += term.coeff * acc.amps[m];
  }
  return out;
}

NilPoly rhs_general(const NilPoly& f, const HamiltonianSpec& H, double t) {
  NilPoly F = exp_nil(f);
  NilPoly HF = apply_operator_terms(hamiltonian_terms(H, t), F);
  return mul(inv_unit(F), HF);
}

NilPoly rhs_nilpotential(const NilPoly& f, const HamiltonianSpec& H,
                         double t) {
  if (!f.all_qubit())
    throw std::invalid_argument("rhs_nilpotential: qubit assembly required");
  switch (H.family) {
    case HamiltonianFamily::Local: {
      NilPoly out(f.caps(), f.rule());
      for (uint32_t i = 0; i < H.n; ++i) {
        std::array<cplx, 3> P = H.local ? H.local(i, t)
                                        : std::array<cplx, 3>{0.0, 0.0, 0.0};
        cplx pminus = P[0] - kI * P[1];
        cplx pplus = P[0] + kI * P[1];
        NilPoly fi = partial(f, i);
        NilPoly gi = generator_poly(f, i);
        out[0] -= P[2];
        out += gi * pminus;
        out += mul(gi * (2.0 * P[2]), fi);
        out += fi * pplus;
        out -= mul(gi, mul(fi, fi)) * pplus;
      }
      return out;
    }
    case HamiltonianFamily::XYUniversal: {
      NilPoly out(f.caps(), f.rule());
      std::vector<NilPoly> fi, gi;
      for (uint32_t i = 0; i < H.n; ++i) {
        fi.push_back(partial(f, i));
        gi.push_back(generator_poly(f, i));
      }
      for (uint32_t i = 0; i < H.n; ++i) {
        std::array<cplx, 3> P = H.local ? H.local(i, t)
                                        : std::array<cplx, 3>{0.0, 0.0, 0.0};
        cplx pminus = P[0] - kI * P[1];
        cplx pplus = P[0] + kI * P[1];
        // f_i (1 - s_i f_i)
        NilPoly hopped = fi[i] - mul(gi[i], mul(fi[i], fi[i]));
        out += gi[i] * pminus;
        out += hopped * pplus;
        if (H.g_pm.size() != 0)
          for (uint32_t j = 0; j < H.n; ++j)
            if (j != i && H.g_pm(i, j) != 0.0)
              out += mul(gi[j], hopped) * H.g_pm(i, j);
      }
      return out;
    }
    case HamiltonianFamily::Spherical:
      return rhs_general(f, H, t);
  }
  throw std::invalid_argument("unknown Hamiltonian family");
}

namespace {

void check_vacuum(const NilPoly& f, double t) {
  NilPoly F = exp_nil(f);
  double n2 = 0.0;
  for (uint64_t i = 0; i < F.size(); ++i) n2 += std::norm(F[i]);
  if (!std::isfinite(n2) || 1.0 / std::sqrt(n2) < 1e-6) {
    std::ostringstream msg;
    msg << "vacuum fraction fell below 1e-6 at t = " << t;
    throw DomainError("VACUUM_ZERO", msg.str());
  }
}

}  // namespace

PolyTrajectory evolve_nilpotential(const NilPoly& f0, const HamiltonianSpec& H,
                                   double T, const IntegratorCfg& cfg) {
  if (cfg.dt <= 0.0) throw std::invalid_argument("dt must be positive");
  auto deriv = [&](const NilPoly& f, double t) {
    NilPoly d = rhs_nilpotential(f, H, t) * (-kI);
    d[0] = 0.0;
    return d;
  };
  NilPoly f = f0;
  f[0] = 0.0;
  PolyTrajectory traj;
  traj.emplace_back(0.0, f);
  uint64_t steps = static_cast<uint64_t>(std::llround(T / cfg.dt));
  for (uint64_t k = 0; k < steps; ++k) {
    double t = k * cfg.dt;
    double h = cfg.dt;
    NilPoly k1 = deriv(f, t);
    NilPoly k2 = deriv(f + k1 * (h / 2.0), t + h / 2.0);
    NilPoly k3 = deriv(f + k2 * (h / 2.0), t + h / 2.0);
    NilPoly k4 = deriv(f + k3 * h, t + h);
    f += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    f[0] = 0.0;
    check_vacuum(f, t + h);
    if ((k + 1) % cfg.checkpoint_stride == 0 || k + 1 == steps)
      traj.emplace_back((k + 1) * cfg.dt, f);
  }
  return traj;
}

StateTrajectory evolve_state(const StateVector& s0, const HamiltonianSpec& H,
                             double T, const IntegratorCfg& cfg) {
  if (cfg.dt <= 0.0) throw std::invalid_argument("dt must be positive");
  auto deriv = [&](const StateVector& s, double t) {
    StateVector d = apply_operator_terms(hamiltonian_terms(H, t), s);
    for (auto& a : d.amps) a *= -kI;
    return d;
  };
  auto axpy = [](const StateVector& s, const StateVector& d, double h) {
    StateVector r = s;
    for (uint64_t i = 0; i < r.amps.size(); ++i) r.amps[i] += h * d.amps[i];
    return r;
  };
  StateVector s = s0;
  StateTrajectory traj;
  traj.emplace_back(0.0, s);
  uint64_t steps = static_cast<uint64_t>(std::llround(T / cfg.dt));
  for (uint64_t k = 0; k < steps; ++k) {
    double t = k * cfg.dt;
    double h = cfg.dt;
    StateVector k1 = deriv(s, t);
    StateVector k2 = deriv(axpy(s, k1, h / 2.0), t + h / 2.0);
    StateVector k3 = deriv(axpy(s, k2, h / 2.0), t + h / 2.0);
    StateVector k4 = deriv(axpy(s, k3, h), t + h);
    for (uint64_t i = 0; i < s.amps.size(); ++i)
      s.amps[i] += (h / 6.0) * (k1.amps[i] + 2.0 * k2.amps[i] +
                                2.0 * k3.amps[i] + k4.amps[i]);
    if ((k + 1) % cfg.checkpoint_stride == 0 || k + 1 == steps)
      traj.emplace_back((k + 1) * cfg.dt, s);
  }
  return traj;
}

std::string trajectory_to_csv(const PolyTrajectory& traj) {
  std::ostringstream out;
  out.precision(15);
  if (traj.empty()) return "";
  uint64_t m = traj.front().second.size();
  out << "t";
  for (uint64_t i = 0; i < m; ++i) out << ",c" << i << "_re,c" << i << "_im";
  out << "\n";
  for (const auto& [t, f] : traj) {
    out << t;
    for (uint64_t i = 0; i < m; ++i)
      out << "," << f[i].real() << "," << f[i].imag();
    out << "\n";
  }
  return out.str();
}

}  // namespace npent
