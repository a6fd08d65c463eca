#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "npent/error.hpp"
#include "npent/state.hpp"

using namespace npent;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector bell() {
  StateVector s({2, 2});
  s.amps = {kInvSqrt2, 0.0, 0.0, kInvSqrt2};
  return s;
}

StateVector ghz(uint32_t n) {
  StateVector s(std::vector<uint32_t>(n, 2));
  s.amps.assign(1ull << n, 0.0);
  s.amps[0] = kInvSqrt2;
  s.amps[(1ull << n) - 1] = kInvSqrt2;
  return s;
}

StateVector two_bell_pairs() {
  StateVector s({2, 2, 2, 2});
  s.amps.assign(16, 0.0);
  s.amps[0] = 0.5;
  s.amps[3] = 0.5;
  s.amps[12] = 0.5;
  s.amps[15] = 0.5;
  return s;
}

Eigen::Matrix2cd random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  cplx a(g(rng), g(rng)), b(g(rng), g(rng));
  double n = std::sqrt(std::norm(a) + std::norm(b));
  a /= n;
  b /= n;
  Eigen::Matrix2cd u;
  u << a, -std::conj(b), b, std::conj(a);
  return u;
}

}  // namespace

TEST_CASE("Bell state polynomial is one plus a bilinear") {
  NilPoly F = to_poly(bell());
  CHECK(std::abs(F[0] - 1.0) < 1e-12);
  CHECK(std::abs(F[3] - 1.0) < 1e-12);
  CHECK(std::abs(F[1]) + std::abs(F[2]) < 1e-12);
}

TEST_CASE("vacuum maps to the unit polynomial") {
  StateVector s({2, 2, 2});
  NilPoly F = to_poly(s);
  CHECK(std::abs(F[0] - 1.0) < 1e-15);
  F[0] = 0.0;
  CHECK(F.max_abs() == 0.0);
}

TEST_CASE("two Bell pairs give the factorized polynomial") {
  NilPoly F = to_poly(two_bell_pairs());
  for (uint64_t i = 0; i < 16; ++i) {
    double expect = (i == 0 || i == 3 || i == 12 || i == 15) ? 1.0 : 0.0;
    CHECK(std::abs(F[i] - expect) < 1e-12);
  }
  NilPoly f = nilpotential(two_bell_pairs());
  for (uint64_t i = 0; i < 16; ++i) {
    double expect = (i == 3 || i == 12) ? 1.0 : 0.0;
    CHECK(std::abs(f[i] - expect) < 1e-12);
  }
}

TEST_CASE("GHZ nilpotential is a single trilinear") {
  NilPoly f = nilpotential(ghz(3));
  CHECK(std::abs(f[7] - 1.0) < 1e-12);
  f[7] = 0.0;
  CHECK(f.max_abs() < 1e-12);
}

TEST_CASE("product-state nilpotential is a sum of linear terms") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  cplx c1(g(rng), g(rng)), c2(g(rng), g(rng)), c3(g(rng), g(rng));
  StateVector s({2, 2, 2});
  for (uint64_t i = 0; i < 8; ++i) {
    cplx v = 1.0;
    if (i & 1) v *= c1;
    if (i & 2) v *= c2;
    if (i & 4) v *= c3;
    s.amps[i] = v;
  }
  NilPoly f = nilpotential(s);
  CHECK(std::abs(f[1] - c1) < 1e-12);
  CHECK(std::abs(f[2] - c2) < 1e-12);
  CHECK(std::abs(f[4] - c3) < 1e-12);
  for (uint64_t i : {3, 5, 6, 7}) CHECK(std::abs(f[i]) < 1e-12);
}

TEST_CASE("vanishing vacuum amplitude is reported") {
  StateVector s({2, 2});
  s.amps = {0.0, 1.0, 0.0, 0.0};
  CHECK_THROWS_AS(to_poly(s), DomainError);
}

TEST_CASE("cross-derivative split criterion matches the partition") {
  NilPoly f = nilpotential(two_bell_pairs());
  CHECK(is_unentangled(f, {0, 1}, {2, 3}));
  CHECK(!is_unentangled(f, {0, 2}, {1, 3}));
  NilPoly g = nilpotential(ghz(3));
  CHECK(!is_unentangled(g, {0}, {1, 2}));
  CHECK(!is_unentangled(g, {0, 1}, {2}));
}

TEST_CASE("Bell reduced density is maximally mixed") {
  Eigen::MatrixXcd rho = reduced_density(bell(), {0});
  CHECK(std::abs(rho(0, 0) - 0.5) < 1e-12);
  CHECK(std::abs(rho(1, 1) - 0.5) < 1e-12);
  CHECK(std::abs(rho(0, 1)) < 1e-12);
}

TEST_CASE("product state reduced density is a projector") {
  std::mt19937_64 rng(5);
  StateVector a = random_state({2}, rng);
  StateVector b = random_state({2, 2}, rng);
  StateVector s({2, 2, 2});
  for (uint64_t i = 0; i < 8; ++i)
    s.amps[i] = a.amps[i & 1] * b.amps[i >> 1];
  Eigen::MatrixXcd rho = reduced_density(s, {1, 2});
  Eigen::MatrixXcd r2 = rho * rho;
  CHECK((r2 - rho).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Bell entropies reach the two-level maximum") {
  Entropies e = entropies(bell(), {0});
  CHECK(std::abs(e.linear - 0.5) < 1e-12);
  CHECK(std::abs(e.von_neumann - std::log(2.0)) < 1e-12);
}

TEST_CASE("two-qubit linear entropy matches its bilinear closed form") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int it = 0; it < 100; ++it) {
    // States with the bilinear-only polynomial 1 + b s2 s1.
    cplx b1(g(rng), g(rng));
    StateVector s({2, 2});
    s.amps = {1.0, 0.0, 0.0, b1};
    s.normalize();
    double m = std::norm(b1);
    double expect = 2.0 * m / ((1.0 + m) * (1.0 + m));
    CHECK(std::abs(entropies(s, {0}).linear - expect) < 1e-10);
  }
}

TEST_CASE("merging two pairs yields an unentangled two-ququart state") {
  StateVector m = merge(two_bell_pairs(), Partition{{{0, 1}, {2, 3}}});
  CHECK(m.dims == std::vector<uint32_t>({4, 4}));
  NilPoly f = nilpotential(m);
  CHECK(is_unentangled(f, {0}, {1}));
  Entropies before = entropies(two_bell_pairs(), {0, 1});
  Entropies after = entropies(m, {0});
  CHECK(std::abs(before.linear - after.linear) < 1e-12);
}

TEST_CASE("merging preserves cut spectra and density matrices") {
  std::mt19937_64 rng(11);
  StateVector s = random_state({2, 2, 2, 2}, rng);
  StateVector m = merge(s, Partition{{{1, 3}, {0, 2}}});
  Entropies e1 = entropies(s, {1, 3});
  Entropies e2 = entropies(m, {0});
  CHECK(std::abs(e1.von_neumann - e2.von_neumann) < 1e-12);
  CHECK(std::abs(e1.linear - e2.linear) < 1e-12);

  // Bipartite coefficient contraction reproduces the reduced density of
  // part A after vacuum normalization.
  StateVector v = m;
  v.vacuum_normalize();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
  for (uint32_t ka = 0; ka < 4; ++ka)
    for (uint32_t kap = 0; kap < 4; ++kap)
      for (uint32_t kb = 0; kb < 4; ++kb)
        rho(ka, kap) += v.amps[ka + 4 * kb] * std::conj(v.amps[kap + 4 * kb]);
  rho /= rho.trace();
  Eigen::MatrixXcd ref = reduced_density(m, {0});
  CHECK((rho - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("merging everything linearizes the polynomial") {
  std::mt19937_64 rng(13);
  StateVector s = random_state({2, 2, 2}, rng);
  StateVector m = merge(s, Partition{{{0, 1, 2}}});
  CHECK(m.dims == std::vector<uint32_t>({8}));
  NilPoly F = to_poly(m);
  CHECK(F.num_elements() == 1);
  CHECK(F.size() == 8);
}

TEST_CASE("random states are deterministic per seed and normalized") {
  StateVector a = random_state({2, 2, 2}, 42);
  StateVector b = random_state({2, 2, 2}, 42);
  StateVector c = random_state({2, 2, 2}, 43);
  CHECK(a.amps == b.amps);
  CHECK(a.amps != c.amps);
  CHECK(std::abs(a.norm_sq() - 1.0) < 1e-12);
}

TEST_CASE("two-qubit determinant is invariant under local rotations") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 50; ++it) {
    StateVector s = random_state({2, 2}, rng);
    cplx inv0 = s.amps[0] * s.amps[3] - s.amps[1] * s.amps[2];
    StateVector t = apply_matrix(s, 0, random_su2(rng));
    t = apply_matrix(t, 1, random_su2(rng));
    cplx inv1 = t.amps[0] * t.amps[3] - t.amps[1] * t.amps[2];
    CHECK(std::abs(std::abs(inv0) - std::abs(inv1)) < 1e-10);
  }
}

TEST_CASE("split criterion agrees with reduced-density rank") {
  std::mt19937_64 rng(19);
  for (int it = 0; it < 100; ++it) {
    bool make_product = it % 2 == 0;
    StateVector s({2, 2, 2});
    if (make_product) {
      StateVector a = random_state({2}, rng);
      StateVector b = random_state({2, 2}, rng);
      for (uint64_t i = 0; i < 8; ++i)
        s.amps[i] = a.amps[i & 1] * b.amps[i >> 1];
    } else {
      s = random_state({2, 2, 2}, rng);
    }
    if (std::abs(s.amps[0]) < 1e-2) continue;
    Eigen::MatrixXcd rho = reduced_density(s, {0});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    bool rank1 = es.eigenvalues().minCoeff() < 1e-9;
    CHECK(is_unentangled(nilpotential(s), {0}, {1, 2}, 1e-7) == rank1);
  }
}

TEST_CASE("JSON round trip preserves the state") {
  StateVector s = random_state({2, 3, 2}, 23);
  StateVector t = state_from_json(state_to_json(s));
  CHECK(s.dims == t.dims);
  REQUIRE(s.amps.size() == t.amps.size());
  for (size_t i = 0; i < s.amps.size(); ++i)
    CHECK(std::abs(s.amps[i] - t.amps[i]) < 1e-15);
}
