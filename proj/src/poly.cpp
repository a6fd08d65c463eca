#include "npent/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace npent {

NilPoly::NilPoly(std::vector<uint32_t> caps, MulRule rule)
    : caps_(std::move(caps)), rule_(rule) {
  if (caps_.empty()) throw std::invalid_argument("NilPoly: no elements");
  stride_.resize(caps_.size());
  uint64_t s = 1;
  for (size_t i = 0; i < caps_.size(); ++i) {
    if (caps_[i] == 0) throw std::invalid_argument("NilPoly: zero cap");
    stride_[i] = s;
    s *= caps_[i] + 1;
  }
  c_.assign(s, cplx(0.0, 0.0));
}

uint64_t NilPoly::flat_index(const std::vector<uint32_t>& exps) const {
  if (exps.size() != caps_.size())
    throw std::invalid_argument("NilPoly: exponent size mismatch");
  uint64_t idx = 0;
  for (size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] > caps_[i])
      throw std::invalid_argument("NilPoly: exponent above cap");
    idx += exps[i] * stride_[i];
  }
  return idx;
}

std::vector<uint32_t> NilPoly::exponents(uint64_t idx) const {
  std::vector<uint32_t> e(caps_.size());
  for (size_t i = 0; i < caps_.size(); ++i) e[i] = exponent(idx, i);
  return e;
}

uint32_t NilPoly::total_degree(uint64_t idx) const {
  uint32_t d = 0;
  for (size_t i = 0; i < caps_.size(); ++i) d += exponent(idx, i);
  return d;
}

bool NilPoly::all_qubit() const {
  return std::all_of(caps_.begin(), caps_.end(),
                     [](uint32_t c) { return c == 1; });
}

bool NilPoly::same_shape(const NilPoly& o) const {
  return caps_ == o.caps_ && rule_ == o.rule_;
}

NilPoly& NilPoly::operator+=(const NilPoly& o) {
  if (!same_shape(o)) throw std::invalid_argument("NilPoly: shape mismatch");
  for (uint64_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

NilPoly& NilPoly::operator-=(const NilPoly& o) {
  if (!same_shape(o)) throw std::invalid_argument("NilPoly: shape mismatch");
  for (uint64_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

NilPoly& NilPoly::operator*=(cplx s) {
  for (auto& v : c_) v *= s;
  return *this;
}

NilPoly operator+(NilPoly a, const NilPoly& b) { return a += b; }
NilPoly operator-(NilPoly a, const NilPoly& b) { return a -= b; }
NilPoly operator*(NilPoly a, cplx s) { return a *= s; }
NilPoly operator*(cplx s, NilPoly a) { return a *= s; }

double NilPoly::max_abs() const {
  double m = 0.0;
  for (const auto& v : c_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Combine exponent tuples of two monomials; returns false if the product
// vanishes under the rule.
bool combine(const NilPoly& p, uint64_t ia, uint64_t ib, MulRule rule,
             uint64_t& out) {
  uint64_t idx = 0;
  for (uint32_t e = 0; e < p.num_elements(); ++e) {
    uint32_t a = p.exponent(ia, e);
    uint32_t b = p.exponent(ib, e);
    uint32_t r;
    switch (rule) {
      case MulRule::QubitSubset:
        if (a + b > 1) return false;
        r = a + b;
        break;
      case MulRule::QuditExclusive:
        if (a != 0 && b != 0) return false;
        r = a + b;
        break;
      case MulRule::DegreeCapped:
        if (a + b > p.caps()[e]) return false;
        r = a + b;
        break;
      default:
        return false;
    }
    idx += static_cast<uint64_t>(r) * p.stride(e);
  }
  out = idx;
  return true;
}

}  // namespace

NilPoly mul(const NilPoly& p, const NilPoly& q) {
  if (!p.same_shape(q)) throw std::invalid_argument("mul: shape mismatch");
  NilPoly r(p.caps(), p.rule());
  if (p.rule() == MulRule::QubitSubset && p.all_qubit()) {
    // Subset convolution: r[m] = sum over submasks s of p[s] q[m^s].
    uint64_t n = p.size();
    for (uint64_t m = 0; m < n; ++m) {
      cplx acc(0.0, 0.0);
      uint64_t s = m;
      while (true) {
        acc += p[s] * q[m ^ s];
        if (s == 0) break;
        s = (s - 1) & m;
      }
      r[m] = acc;
    }
    return r;
  }
  for (uint64_t ia = 0; ia < p.size(); ++ia) {
    if (p[ia] == cplx(0.0, 0.0)) continue;
    for (uint64_t ib = 0; ib < q.size(); ++ib) {
      if (q[ib] == cplx(0.0, 0.0)) continue;
      uint64_t out;
      if (combine(p, ia, ib, p.rule(), out)) r[out] += p[ia] * q[ib];
    }
  }
  return r;
}

NilPoly log_unit(const NilPoly& f) {
  cplx c0 = f[0];
  if (std::abs(c0) == 0.0)
    throw std::invalid_argument("log_unit: vanishing constant term");
  NilPoly g = f * (1.0 / c0);
  g[0] = cplx(0.0, 0.0);
  uint32_t kmax = 0;
  for (uint32_t c : f.caps()) kmax += c;
  NilPoly out(f.caps(), f.rule());
  NilPoly gk = g;
  double sign = 1.0;
  for (uint32_t k = 1; k <= kmax; ++k) {
    out += gk * cplx(sign / k, 0.0);
    if (k < kmax) gk = mul(gk, g);
    sign = -sign;
  }
  out[0] = std::log(c0);
  return out;
}

NilPoly exp_nil(const NilPoly& f) {
  cplx c0 = f[0];
  NilPoly g = f;
  g[0] = cplx(0.0, 0.0);
  uint32_t kmax = 0;
  for (uint32_t c : f.caps()) kmax += c;
  NilPoly out(f.caps(), f.rule());
  out[0] = cplx(1.0, 0.0);
  NilPoly gk = g;
  double fact = 1.0;
  for (uint32_t k = 1; k <= kmax; ++k) {
    fact /= k;
    out += gk * cplx(fact, 0.0);
    if (k < kmax) gk = mul(gk, g);
  }
  out *= std::exp(c0);
  return out;
}

NilPoly inv_unit(const NilPoly& f) {
  cplx c0 = f[0];
  if (std::abs(c0) == 0.0)
    throw std::invalid_argument("inv_unit: vanishing constant term");
  NilPoly g = f * (1.0 / c0);
  g[0] = cplx(0.0, 0.0);
  uint32_t kmax = 0;
  for (uint32_t c : f.caps()) kmax += c;
  NilPoly out(f.caps(), f.rule());
  out[0] = cplx(1.0, 0.0);
  NilPoly gk = g;
  double sign = -1.0;
  for (uint32_t k = 1; k <= kmax; ++k) {
    out += gk * cplx(sign, 0.0);
    if (k < kmax) gk = mul(gk, g);
    sign = -sign;
  }
  out *= 1.0 / c0;
  return out;
}

NilPoly partial(const NilPoly& p, uint32_t elem, uint32_t level) {
  if (elem >= p.num_elements())
    throw std::invalid_argument("partial: bad element");
  if (level == 0 || level > p.caps()[elem])
    throw std::invalid_argument("partial: bad level");
  NilPoly r(p.caps(), p.rule());
  uint64_t st = p.stride(elem);
  for (uint64_t i = 0; i < p.size(); ++i) {
    uint32_t e = p.exponent(i, elem);
    if (p.rule() == MulRule::DegreeCapped) {
      if (e == 0) continue;
      r[i - st] += static_cast<double>(e) * p[i];
    } else {
      if (e != level) continue;
      r[i - static_cast<uint64_t>(level) * st] += p[i];
    }
  }
  return r;
}

NilPoly affine_substitute(const NilPoly& p, uint32_t elem, cplx a, cplx b) {
  if (elem >= p.num_elements())
    throw std::invalid_argument("affine_substitute: bad element");
  if (p.rule() == MulRule::QuditExclusive)
    throw std::invalid_argument(
        "affine_substitute: not defined for exclusive-level rule");
  NilPoly r(p.caps(), p.rule());
  uint32_t cap = p.caps()[elem];
  uint64_t st = p.stride(elem);
  // Precompute binomial expansion of (a + b x)^k for k = 0..cap.
  std::vector<cplx> apow(cap + 1), bpow(cap + 1);
  apow[0] = bpow[0] = cplx(1.0, 0.0);
  for (uint32_t k = 1; k <= cap; ++k) {
    apow[k] = apow[k - 1] * a;
    bpow[k] = bpow[k - 1] * b;
  }
  std::vector<std::vector<cplx>> pw(cap + 1);
  for (uint32_t k = 0; k <= cap; ++k) {
    pw[k].assign(k + 1, cplx(0.0, 0.0));
    double binom = 1.0;
    for (uint32_t j = 0; j <= k; ++j) {
      pw[k][j] = binom * apow[k - j] * bpow[j];
      binom = binom * (k - j) / (j + 1);
    }
  }
  for (uint64_t i = 0; i < p.size(); ++i) {
    if (p[i] == cplx(0.0, 0.0)) continue;
    uint32_t k = p.exponent(i, elem);
    uint64_t base = i - static_cast<uint64_t>(k) * st;
    for (uint32_t j = 0; j <= k; ++j) r[base + j * st] += p[i] * pw[k][j];
  }
  return r;
}

}  // namespace npent
