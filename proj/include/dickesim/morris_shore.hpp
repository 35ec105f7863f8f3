#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dickesim/sector.hpp"

namespace dickesim {

// Dense integer Gram matrices of one coupling block V(mu):
//   upper = V V^T   acting on the mu-phonon manifold,
//   lower = V^T V   acting on the (mu-1)-phonon manifold.
// Entries are exact small integers (counts of shared neighbours).
struct GramPair {
  int mu = 0;
  std::size_t upper_dim = 0;
  std::size_t lower_dim = 0;
  std::vector<long long> upper;  // row-major upper_dim x upper_dim
  std::vector<long long> lower;  // row-major lower_dim x lower_dim
};

GramPair gram_products(const SectorBasis& basis, int mu);

// Factorisation conditions on one intermediate manifold mu: the two Gram
// matrices meeting there must commute and differ by (N - 2m + 2mu) * I.
struct MsPerManifold {
  int mu = 0;
  double commutator_norm = 0.0;    // max |[V V^T(mu), V^T V(mu+1)]| entry
  double identity_residual = 0.0;  // max |V V^T(mu) - V^T V(mu+1) - c*I|
  bool diag_upper_ok = false;      // diag of V V^T(mu) == N - m + mu
  bool diag_lower_ok = false;      // diag of V^T V(mu+1) == m - mu
  bool offdiag_count_ok = false;   // (m-mu)(N-m+mu) off-diagonal ones per row
  bool offdiag_match_ok = false;   // off-diagonals of the two Grams coincide
};

struct MsVerificationReport {
  int n_ions = 0;
  int n_quanta = 0;
  std::size_t sector_dim = 0;
  std::vector<MsPerManifold> per_manifold;  // mu = 1 .. m-1
  bool pass = false;
};

// Default cap on a single manifold dimension for the dense integer products.
inline constexpr std::size_t kMsManifoldCap = 2048;

// Checks the factorisation conditions on every intermediate manifold with
// exact integer arithmetic. Residuals are exactly zero on pass. m = 1 has no
// intermediate manifold and passes trivially.
MsVerificationReport verify_ms_conditions(
    int n_ions, int n_quanta, std::size_t manifold_cap = kMsManifoldCap);

std::string to_text(const MsVerificationReport& report);

// lambda_{mu,mu-1} / Omega = (1/2) sqrt(mu (m-mu+1) (N-m+mu)), mu = 1..m.
std::vector<double> ladder_couplings(int n_ions, int n_quanta);

// The unique longest chain in the factorised basis: level l holds the
// symmetric Dicke state with l ionic excitations and m-l phonons, so level 0
// is the pure-phonon end and level m is the all-ionic Dicke target.
struct DickeLadder {
  std::vector<StateVector> states;  // size m+1, level order
  std::vector<double> couplings;    // size m; [g] joins levels g and g+1
  std::vector<double> detunings;    // size m+1; multiplies delta(t)T
};

// Builds the ladder and self-checks that each symmetric state is a Gram
// eigenvector with eigenvalue (m-mu+1)(N-m+mu) and that projecting the
// coupling block between adjacent symmetric states reproduces the analytic
// couplings, both to 1e-12.
DickeLadder build_dicke_ladder(const BasisPtr& basis);

}  // namespace dickesim
