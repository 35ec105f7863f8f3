#include "dickesim/sector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace dickesim {

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (n > 63)
    throw InvalidArgs("binomial arguments above 63 may overflow 64 bits");
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // Exact: i divides result*(n-k+i), and the split below preserves that
    // divisibility term by term (mod-i argument) without overflow.
    const std::uint64_t f = n - k + i;
    result = result / i * f + result % i * f / i;
  }
  return result;
}

namespace {

// Append all N-bit patterns with exactly k set bits, in ascending order.
void append_patterns(int n_ions, int k, std::vector<IonPattern>& out) {
  if (k == 0) {
    out.push_back(0);
    return;
  }
  const std::uint64_t limit = std::uint64_t{1} << n_ions;
  std::uint64_t v = (std::uint64_t{1} << k) - 1;
  while (v < limit) {
    out.push_back(static_cast<IonPattern>(v));
    std::uint64_t t = v | (v - 1);  // fill trailing zeros below lowest set run
    v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
  }
}

}  // namespace

SectorBasis::SectorBasis(int n_ions, int n_quanta, std::size_t dim_cap)
    : n_ions_(n_ions), n_quanta_(n_quanta) {
  if (n_ions < 1 || n_ions > kMaxIons)
    throw InvalidArgs("ions must be between 1 and " +
                      std::to_string(kMaxIons));
  if (n_quanta < 0) throw InvalidArgs("excitations must be non-negative");
  if (n_quanta > n_ions)
    throw InvalidArgs("excitations must not exceed ions");

  std::uint64_t total = 0;
  for (int mu = n_quanta; mu >= 0; --mu)
    total += binomial(n_ions, n_quanta - mu);
  if (total > dim_cap)
    throw DimensionCap("sector dimension " + std::to_string(total) +
                       " exceeds cap " + std::to_string(dim_cap));

  patterns_.reserve(total);
  offsets_.reserve(n_quanta + 2);
  for (int mu = n_quanta; mu >= 0; --mu) {
    offsets_.push_back(patterns_.size());
    append_patterns(n_ions, n_quanta - mu, patterns_);
  }
  offsets_.push_back(patterns_.size());
}

IonPhononState SectorBasis::state_at(std::size_t index) const {
  if (index >= dim()) throw InvalidArgs("basis index out of range");
  return {patterns_[index], manifold_of(index)};
}

bool SectorBasis::contains(IonPattern ions, int phonons) const {
  if (phonons < 0 || phonons > n_quanta_) return false;
  if (n_ions_ < kMaxIons && (ions >> n_ions_) != 0) return false;
  return std::popcount(ions) == n_quanta_ - phonons;
}

std::size_t SectorBasis::index_of(IonPattern ions, int phonons) const {
  if (!contains(ions, phonons))
    throw NotInSector("state (pattern " + std::to_string(ions) + ", phonons " +
                      std::to_string(phonons) + ") is not in the " +
                      std::to_string(n_quanta_) + "-quantum sector of " +
                      std::to_string(n_ions_) + " ions");
  const auto first = patterns_.begin() + manifold_begin(phonons);
  const auto last = patterns_.begin() + manifold_end(phonons);
  const auto it = std::lower_bound(first, last, ions);
  return static_cast<std::size_t>(it - patterns_.begin());
}

std::size_t SectorBasis::manifold_begin(int mu) const {
  if (mu < 0 || mu > n_quanta_)
    throw InvalidArgs("phonon manifold out of range");
  return offsets_[n_quanta_ - mu];
}

std::size_t SectorBasis::manifold_end(int mu) const {
  if (mu < 0 || mu > n_quanta_)
    throw InvalidArgs("phonon manifold out of range");
  return offsets_[n_quanta_ - mu + 1];
}

std::size_t SectorBasis::manifold_dim(int mu) const {
  return manifold_end(mu) - manifold_begin(mu);
}

int SectorBasis::manifold_of(std::size_t index) const {
  if (index >= dim()) throw InvalidArgs("basis index out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  const int slot = static_cast<int>(it - offsets_.begin()) - 1;
  return n_quanta_ - slot;
}

BasisPtr enumerate_sector(int n_ions, int n_quanta, std::size_t dim_cap) {
  return std::make_shared<const SectorBasis>(n_ions, n_quanta, dim_cap);
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amp) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw InvalidArgs("cannot normalize the zero vector");
  for (auto& a : amp) a /= n;
}

StateVector dicke_state(const BasisPtr& basis, int k) {
  if (!basis) throw InvalidArgs("basis must not be null");
  if (k < 0 || k > basis->n_quanta())
    throw InvalidArgs("excitation number must be between 0 and the sector's "
                      "quantum number");
  const int mu = basis->n_quanta() - k;
  StateVector state{basis, std::vector<std::complex<double>>(basis->dim())};
  const double a = 1.0 / std::sqrt(double(basis->manifold_dim(mu)));
  for (std::size_t i = basis->manifold_begin(mu); i < basis->manifold_end(mu);
       ++i)
    state.amp[i] = a;
  return state;
}

StateVector product_state(const BasisPtr& basis, IonPattern ions,
                          int phonons) {
  if (!basis) throw InvalidArgs("basis must not be null");
  StateVector state{basis, std::vector<std::complex<double>>(basis->dim())};
  state.amp[basis->index_of(ions, phonons)] = 1.0;
  return state;
}

StateVector permute_ions(const StateVector& state, std::span<const int> perm) {
  if (!state.basis) throw InvalidArgs("state has no basis");
  const SectorBasis& basis = *state.basis;
  const int n = basis.n_ions();
  if (static_cast<int>(perm.size()) != n)
    throw InvalidArgs("permutation length must equal the number of ions");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p])
      throw InvalidArgs("permutation must be a bijection on ion labels");
    seen[p] = true;
  }
  StateVector out{state.basis, std::vector<std::complex<double>>(basis.dim())};
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    if (state.amp[i] == std::complex<double>{}) continue;
    const IonPhononState s = basis.state_at(i);
    IonPattern mapped = 0;
    for (int j = 0; j < n; ++j)
      if ((s.ions >> j) & 1u) mapped |= IonPattern{1} << perm[j];
    out.amp[basis.index_of(mapped, s.phonons)] += state.amp[i];
  }
  return out;
}

std::complex<double> inner(const StateVector& a, const StateVector& b) {
  if (!a.basis || !b.basis) throw InvalidArgs("state has no basis");
  if (!(*a.basis == *b.basis))
    throw BasisMismatch("states live on different sectors");
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < a.amp.size(); ++i)
    s += std::conj(a.amp[i]) * b.amp[i];
  return s;
}

}  // namespace dickesim
