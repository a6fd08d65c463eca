#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace npent {

using cplx = std::complex<double>;

// Product rule for the commuting nilpotent generators attached to each
// element of a composite system.
enum class MulRule {
  // One generator per element with square zero; monomials are bitmasks and
  // products of overlapping monomials vanish.
  QubitSubset,
  // One generator per excited level of each element; a product vanishes
  // unless, for every element, at least one factor sits at level zero.
  QuditExclusive,
  // A single generator per element with vanishing power cap_i + 1;
  // exponents add and terms beyond the cap are dropped.
  DegreeCapped
};

// Dense polynomial over commuting nilpotent generators.  Coefficients are
// stored mixed-radix little-endian: element 0 is the fastest index, so the
// flat index of a monomial equals the conventional decimal shorthand for
// the occupation string k_n ... k_1.
class NilPoly {
 public:
  NilPoly() = default;
  NilPoly(std::vector<uint32_t> caps, MulRule rule);

  uint32_t num_elements() const { return static_cast<uint32_t>(caps_.size()); }
  uint64_t size() const { return c_.size(); }
  const std::vector<uint32_t>& caps() const { return caps_; }
  MulRule rule() const { return rule_; }

  cplx& operator[](uint64_t i) { return c_[i]; }
  const cplx& operator[](uint64_t i) const { return c_[i]; }
  std::vector<cplx>& coeffs() { return c_; }
  const std::vector<cplx>& coeffs() const { return c_; }

  uint64_t stride(uint32_t elem) const { return stride_[elem]; }
  uint32_t exponent(uint64_t idx, uint32_t elem) const {
    return static_cast<uint32_t>(idx / stride_[elem] % (caps_[elem] + 1));
  }
  uint64_t flat_index(const std::vector<uint32_t>& exps) const;
  std::vector<uint32_t> exponents(uint64_t idx) const;
  uint32_t total_degree(uint64_t idx) const;

  bool all_qubit() const;
  bool same_shape(const NilPoly& o) const;

  NilPoly& operator+=(const NilPoly& o);
  NilPoly& operator-=(const NilPoly& o);
  NilPoly& operator*=(cplx s);

  double max_abs() const;

 private:
  std::vector<uint32_t> caps_;
  std::vector<uint64_t> stride_;
  std::vector<cplx> c_;
  MulRule rule_ = MulRule::QubitSubset;
};

NilPoly operator+(NilPoly a, const NilPoly& b);
NilPoly operator-(NilPoly a, const NilPoly& b);
NilPoly operator*(NilPoly a, cplx s);
NilPoly operator*(cplx s, NilPoly a);

// Product of two polynomials under the shared nilpotent rule.
NilPoly mul(const NilPoly& p, const NilPoly& q);

// Logarithm of a polynomial with nonzero constant term; the constant term
// of the result is the principal log of the constant term of the input.
NilPoly log_unit(const NilPoly& f);

// Exponential (terminating series).
NilPoly exp_nil(const NilPoly& f);

// Multiplicative inverse of a polynomial with nonzero constant term.
NilPoly inv_unit(const NilPoly& f);

// Derivative with respect to the generator of `elem`.  For QubitSubset the
// generator exponent drops from 1 to 0; for DegreeCapped this is the usual
// polynomial derivative.  For QuditExclusive, `level` selects which excited
// level's generator is differentiated.
NilPoly partial(const NilPoly& p, uint32_t elem, uint32_t level = 1);

// Substitute generator_i -> a + b * generator_i (QubitSubset / DegreeCapped).
NilPoly affine_substitute(const NilPoly& p, uint32_t elem, cplx a, cplx b);

}  // namespace npent
