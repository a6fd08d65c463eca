#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "npent/poly.hpp"

namespace npent {

// Dense pure state of an assembly of elements with per-element dimensions.
// Amplitudes are stored mixed-radix little-endian (element 0 fastest), so a
// flat index equals the decimal shorthand of the occupation string k_n..k_1.
struct StateVector {
  std::vector<uint32_t> dims;
  std::vector<cplx> amps;

  StateVector() = default;
  StateVector(std::vector<uint32_t> d, std::vector<cplx> a);
  explicit StateVector(std::vector<uint32_t> d);  // vacuum |0...0>

  uint32_t num_elements() const { return static_cast<uint32_t>(dims.size()); }
  uint64_t dim() const { return amps.size(); }
  uint64_t stride(uint32_t elem) const;
  uint32_t level(uint64_t idx, uint32_t elem) const;

  double norm_sq() const;
  void normalize();          // probability normalization
  void vacuum_normalize();   // divide by the vacuum amplitude
  bool is_qubit_assembly() const;
};

// Disjoint element groups covering the whole assembly.
struct Partition {
  std::vector<std::vector<uint32_t>> groups;
};

// F with unit constant term: alpha_k = psi_k / psi_0.
NilPoly to_poly(const StateVector& s);
// State with amplitudes equal to the coefficients of F.
StateVector from_poly(const NilPoly& F, const std::vector<uint32_t>& dims);
// log of to_poly.
NilPoly nilpotential(const StateVector& s);

// True iff no cross second derivative of f couples A and B.
bool is_unentangled(const NilPoly& f, const std::vector<uint32_t>& A,
                    const std::vector<uint32_t>& B, double tol = 1e-9);

// Reduced density matrix over the kept elements (input need not be
// normalized; the result is trace-normalized).
Eigen::MatrixXcd reduced_density(const StateVector& s,
                                 const std::vector<uint32_t>& keep);

struct Entropies {
  double von_neumann;
  double linear;
};
Entropies entropies(const StateVector& s, const std::vector<uint32_t>& A);

// Regroup elements into composite elements; amplitudes are reindexed
// exactly, preserving all bipartite spectra compatible with the partition.
StateVector merge(const StateVector& s, const Partition& part);

// I.i.d. complex Gaussian amplitudes, probability-normalized.
StateVector random_state(const std::vector<uint32_t>& dims, uint64_t seed);
StateVector random_state(const std::vector<uint32_t>& dims,
                         std::mt19937_64& rng);

// Apply a d x d matrix to one element of the state.
StateVector apply_matrix(const StateVector& s, uint32_t elem,
                         const Eigen::MatrixXcd& m);

// JSON I/O: {"dims":[...], "amps":[[re,im],...]}.
StateVector state_from_json(const std::string& text);
std::string state_to_json(const StateVector& s);
StateVector load_state(const std::string& path);

}  // namespace npent
