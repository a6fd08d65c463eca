#include "npent/state.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "npent/error.hpp"

namespace npent {

namespace {
constexpr double kVacuumZeroTol = 1e-6;

std::vector<uint32_t> poly_caps(const std::vector<uint32_t>& dims) {
  std::vector<uint32_t> caps(dims.size());
  for (size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 2) throw std::invalid_argument("element dimension < 2");
    caps[i] = dims[i] - 1;
  }
  return caps;
}

MulRule rule_for(const std::vector<uint32_t>& dims) {
  bool all2 = std::all_of(dims.begin(), dims.end(),
                          [](uint32_t d) { return d == 2; });
  return all2 ? MulRule::QubitSubset : MulRule::QuditExclusive;
}
}  // namespace

StateVector::StateVector(std::vector<uint32_t> d, std::vector<cplx> a)
    : dims(std::move(d)), amps(std::move(a)) {
  uint64_t n = 1;
  for (uint32_t di : dims) n *= di;
  if (amps.size() != n)
    throw std::invalid_argument("StateVector: amplitude count mismatch");
}

StateVector::StateVector(std::vector<uint32_t> d) : dims(std::move(d)) {
  uint64_t n = 1;
  for (uint32_t di : dims) n *= di;
  amps.assign(n, cplx(0.0, 0.0));
  amps[0] = cplx(1.0, 0.0);
}

uint64_t StateVector::stride(uint32_t elem) const {
  uint64_t s = 1;
  for (uint32_t i = 0; i < elem; ++i) s *= dims[i];
  return s;
}

uint32_t StateVector::level(uint64_t idx, uint32_t elem) const {
  return static_cast<uint32_t>(idx / stride(elem) % dims[elem]);
}

double StateVector::norm_sq() const {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

void StateVector::normalize() {
  double n = std::sqrt(norm_sq());
  if (n == 0.0) throw std::invalid_argument("normalize: zero state");
  for (auto& a : amps) a /= n;
}

void StateVector::vacuum_normalize() {
  cplx v = amps[0];
  if (std::abs(v) < kVacuumZeroTol)
    throw DomainError("VACUUM_ZERO", "vacuum amplitude too small");
  for (auto& a : amps) a /= v;
}

bool StateVector::is_qubit_assembly() const {
  return std::all_of(dims.begin(), dims.end(),
                     [](uint32_t d) { return d == 2; });
}

NilPoly to_poly(const StateVector& s) {
  cplx v = s.amps[0];
  if (std::abs(v) < kVacuumZeroTol * std::sqrt(s.norm_sq()))
    throw DomainError("VACUUM_ZERO", "vacuum amplitude too small");
  NilPoly F(poly_caps(s.dims), rule_for(s.dims));
  for (uint64_t i = 0; i < s.amps.size(); ++i) F[i] = s.amps[i] / v;
  return F;
}

StateVector from_poly(const NilPoly& F, const std::vector<uint32_t>& dims) {
  StateVector s(dims);
  if (s.amps.size() != F.size())
    throw std::invalid_argument("from_poly: shape mismatch");
  s.amps.assign(F.coeffs().begin(), F.coeffs().end());
  return s;
}

NilPoly nilpotential(const StateVector& s) { return log_unit(to_poly(s)); }

bool is_unentangled(const NilPoly& f, const std::vector<uint32_t>& A,
                    const std::vector<uint32_t>& B, double tol) {
  for (uint32_t a : A)
    for (uint32_t b : B) {
      if (a == b) throw std::invalid_argument("is_unentangled: overlap");
      for (uint32_t la = 1; la <= f.caps()[a]; ++la)
        for (uint32_t lb = 1; lb <= f.caps()[b]; ++lb) {
          NilPoly d = partial(partial(f, a, la), b, lb);
          if (d.max_abs() > tol) return false;
        }
    }
  return true;
}

Eigen::MatrixXcd reduced_density(const StateVector& s,
                                 const std::vector<uint32_t>& keep) {
  if (keep.empty()) throw std::invalid_argument("reduced_density: empty keep");
  std::vector<bool> kept(s.dims.size(), false);
  for (uint32_t k : keep) kept.at(k) = true;
  std::vector<uint32_t> rest;
  for (uint32_t i = 0; i < s.num_elements(); ++i)
    if (!kept[i]) rest.push_back(i);

  uint64_t dk = 1;
  for (uint32_t k : keep) dk *= s.dims[k];
  uint64_t dr = 1;
  for (uint32_t r : rest) dr *= s.dims[r];

  auto pack = [&s](uint64_t idx, const std::vector<uint32_t>& elems) {
    uint64_t out = 0, st = 1;
    for (uint32_t e : elems) {
      out += static_cast<uint64_t>(s.level(idx, e)) * st;
      st *= s.dims[e];
    }
    return out;
  };

  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(dk, dr);
  for (uint64_t i = 0; i < s.amps.size(); ++i)
    psi(pack(i, keep), pack(i, rest)) += s.amps[i];
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  double tr = rho.trace().real();
  if (tr <= 0.0) throw std::invalid_argument("reduced_density: zero state");
  return rho / tr;
}

Entropies entropies(const StateVector& s, const std::vector<uint32_t>& A) {
  Eigen::MatrixXcd rho = reduced_density(s, A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  double svn = 0.0, purity = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double p = es.eigenvalues()(i);
    if (p > 1e-15) svn -= p * std::log(p);
    purity += p * p;
  }
  return {svn, 1.0 - purity};
}

StateVector merge(const StateVector& s, const Partition& part) {
  std::vector<bool> seen(s.dims.size(), false);
  uint32_t count = 0;
  for (const auto& g : part.groups)
    for (uint32_t e : g) {
      if (e >= s.dims.size() || seen[e])
        throw std::invalid_argument("merge: invalid partition");
      seen[e] = true;
      ++count;
    }
  if (count != s.dims.size())
    throw std::invalid_argument("merge: partition must cover all elements");

  std::vector<uint32_t> ndims;
  ndims.reserve(part.groups.size());
  for (const auto& g : part.groups) {
    uint64_t d = 1;
    for (uint32_t e : g) d *= s.dims[e];
    ndims.push_back(static_cast<uint32_t>(d));
  }
  StateVector out(ndims);
  for (uint64_t i = 0; i < s.amps.size(); ++i) {
    uint64_t ni = 0, st = 1;
    for (const auto& g : part.groups) {
      uint64_t gi = 0, gst = 1;
      for (uint32_t e : g) {
        gi += static_cast<uint64_t>(s.level(i, e)) * gst;
        gst *= s.dims[e];
      }
      ni += gi * st;
      st *= gst;
    }
    out.amps[ni] = s.amps[i];
  }
  return out;
}

StateVector random_state(const std::vector<uint32_t>& dims,
                         std::mt19937_64& rng) {
  StateVector s(dims);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& a : s.amps) {
    double re = g(rng);
    double im = g(rng);
    a = cplx(re, im);
  }
  s.normalize();
  return s;
}

StateVector random_state(const std::vector<uint32_t>& dims, uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_state(dims, rng);
}

StateVector apply_matrix(const StateVector& s, uint32_t elem,
                         const Eigen::MatrixXcd& m) {
  uint32_t d = s.dims.at(elem);
  if (m.rows() != d || m.cols() != d)
    throw std::invalid_argument("apply_matrix: matrix size mismatch");
  StateVector out = s;
  uint64_t st = s.stride(elem);
  for (uint64_t base = 0; base < s.amps.size(); ++base) {
    if (s.level(base, elem) != 0) continue;
    for (uint32_t r = 0; r < d; ++r) {
      cplx acc(0.0, 0.0);
      for (uint32_t c = 0; c < d; ++c) acc += m(r, c) * s.amps[base + c * st];
      out.amps[base + r * st] = acc;
    }
  }
  return out;
}

StateVector state_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  StateVector s;
  for (const auto& d : j.at("dims")) s.dims.push_back(d.get<uint32_t>());
  for (const auto& a : j.at("amps"))
    s.amps.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
  uint64_t n = 1;
  for (uint32_t d : s.dims) n *= d;
  if (s.amps.size() != n)
    throw std::invalid_argument("state JSON: amplitude count mismatch");
  return s;
}

std::string state_to_json(const StateVector& s) {
  nlohmann::json j;
  j["dims"] = s.dims;
  auto& amps = j["amps"] = nlohmann::json::array();
  for (const auto& a : s.amps) amps.push_back({a.real(), a.imag()});
  return j.dump();
}

StateVector load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return state_from_json(ss.str());
}

}  // namespace npent
