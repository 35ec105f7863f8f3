#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dickesim/errors.hpp"

namespace dickesim {

// Bit pattern of ionic excitations: bit j set means ion j is excited.
using IonPattern = std::uint32_t;

// One basis state: an ionic excitation pattern together with a phonon count.
struct IonPhononState {
  IonPattern ions = 0;
  int phonons = 0;
  friend bool operator==(const IonPhononState&, const IonPhononState&) = default;
};

// Basis of the sector with a fixed total number of quanta (ionic excitations
// plus phonons). States are grouped into phonon manifolds, ordered from the
// highest phonon number down to zero; within a manifold, patterns are sorted
// ascending. The all-ground pattern with every quantum in the phonon mode is
// therefore always index 0.
class SectorBasis {
 public:
  static constexpr std::size_t kDefaultDimCap = 200000;
  static constexpr int kMaxIons = 32;

  SectorBasis(int n_ions, int n_quanta, std::size_t dim_cap = kDefaultDimCap);

  int n_ions() const { return n_ions_; }
  int n_quanta() const { return n_quanta_; }
  std::size_t dim() const { return patterns_.size(); }

  IonPhononState state_at(std::size_t index) const;

  // Index of a basis state; throws NotInSector if the pair does not belong.
  std::size_t index_of(IonPattern ions, int phonons) const;
  bool contains(IonPattern ions, int phonons) const;

  // Phonon manifold mu occupies the index range [begin, end).
  std::size_t manifold_begin(int mu) const;
  std::size_t manifold_end(int mu) const;
  std::size_t manifold_dim(int mu) const;
  int manifold_of(std::size_t index) const;

  // Two bases are interchangeable iff they describe the same sector.
  friend bool operator==(const SectorBasis& a, const SectorBasis& b) {
    return a.n_ions_ == b.n_ions_ && a.n_quanta_ == b.n_quanta_;
  }

 private:
  int n_ions_ = 0;
  int n_quanta_ = 0;
  std::vector<IonPattern> patterns_;   // concatenated manifolds, mu = m .. 0
  std::vector<std::size_t> offsets_;   // offsets_[m - mu] = manifold_begin(mu)
};

using BasisPtr = std::shared_ptr<const SectorBasis>;

BasisPtr enumerate_sector(int n_ions, int n_quanta,
                          std::size_t dim_cap = SectorBasis::kDefaultDimCap);

// State vector over a sector basis.
struct StateVector {
  BasisPtr basis;
  std::vector<std::complex<double>> amp;

  std::size_t dim() const { return amp.size(); }
  double norm() const;
  void normalize();
};

// Symmetric Dicke state with k ionic excitations: every pattern of k excited
// ions carries amplitude 1/sqrt(C(N, k)), the rest of the quanta sit in the
// phonon mode.
StateVector dicke_state(const BasisPtr& basis, int k);

// Single basis state with unit amplitude.
StateVector product_state(const BasisPtr& basis, IonPattern ions, int phonons);

// Relabel ions: ion j of the input becomes ion perm[j] of the output.
StateVector permute_ions(const StateVector& state, std::span<const int> perm);

std::complex<double> inner(const StateVector& a, const StateVector& b);

// Exact binomial coefficient; throws InvalidArgs on overflow of 64 bits.
std::uint64_t binomial(int n, int k);

}  // namespace dickesim
