#include "dickesim/morris_shore.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "dickesim/hamiltonian.hpp"

namespace dickesim {

GramPair gram_products(const SectorBasis& basis, int mu) {
  const CouplingBlock block = build_coupling_block(basis, mu);
  GramPair g;
  g.mu = mu;
  g.upper_dim = block.rows;
  g.lower_dim = block.cols;
  g.upper.assign(g.upper_dim * g.upper_dim, 0);
  g.lower.assign(g.lower_dim * g.lower_dim, 0);

  // Group entries by column to accumulate V V^T, and by row for V^T V.
  std::vector<std::vector<std::uint32_t>> rows_of_col(block.cols);
  std::vector<std::vector<std::uint32_t>> cols_of_row(block.rows);
  for (const auto& e : block.entries) {
    rows_of_col[e.col].push_back(e.row);
    cols_of_row[e.row].push_back(e.col);
  }
  for (const auto& rows : rows_of_col)
    for (std::uint32_t r1 : rows)
      for (std::uint32_t r2 : rows) g.upper[r1 * g.upper_dim + r2] += 1;
  for (const auto& cols : cols_of_row)
    for (std::uint32_t c1 : cols)
      for (std::uint32_t c2 : cols) g.lower[c1 * g.lower_dim + c2] += 1;
  return g;
}

MsVerificationReport verify_ms_conditions(int n_ions, int n_quanta,
                                          std::size_t manifold_cap) {
  if (n_quanta < 1) throw InvalidArgs("excitations must be at least 1");
  auto basis = enumerate_sector(n_ions, n_quanta);
  for (int mu = 0; mu <= n_quanta; ++mu)
    if (basis->manifold_dim(mu) > manifold_cap)
      throw DimensionCap("manifold dimension exceeds the verification cap " +
                         std::to_string(manifold_cap));

  MsVerificationReport report;
  report.n_ions = n_ions;
  report.n_quanta = n_quanta;
  report.sector_dim = basis->dim();
  report.pass = true;

  const int N = n_ions;
  const int m = n_quanta;
  GramPair here = gram_products(*basis, 1);
  for (int mu = 1; mu <= m - 1; ++mu) {
    GramPair above = gram_products(*basis, mu + 1);
    // Both act on manifold mu: "upper" of block mu and "lower" of block mu+1.
    const std::size_t d = here.upper_dim;
    const std::vector<long long>& a = here.upper;
    const std::vector<long long>& b = above.lower;

    MsPerManifold row;
    row.mu = mu;

    long long comm_max = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        long long s = 0;
        for (std::size_t k = 0; k < d; ++k)
          s += a[i * d + k] * b[k * d + j] - b[i * d + k] * a[k * d + j];
        comm_max = std::max(comm_max, std::llabs(s));
      }
    row.commutator_norm = double(comm_max);

    const long long shift = N - 2 * m + 2 * mu;
    long long id_max = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const long long expect = (i == j) ? shift : 0;
        id_max = std::llabs(a[i * d + j] - b[i * d + j] - expect) > id_max
                     ? std::llabs(a[i * d + j] - b[i * d + j] - expect)
                     : id_max;
      }
    row.identity_residual = double(id_max);

    row.diag_upper_ok = true;
    row.diag_lower_ok = true;
    row.offdiag_count_ok = true;
    row.offdiag_match_ok = true;
    const long long diag_upper = N - m + mu;
    const long long diag_lower = m - mu;
    const long long per_row = (long long)(m - mu) * (N - m + mu);
    for (std::size_t i = 0; i < d; ++i) {
      if (a[i * d + i] != diag_upper) row.diag_upper_ok = false;
      if (b[i * d + i] != diag_lower) row.diag_lower_ok = false;
      long long count = 0;
      for (std::size_t j = 0; j < d; ++j) {
        if (i == j) continue;
        const long long v = a[i * d + j];
        if (v != 0 && v != 1) row.offdiag_count_ok = false;
        count += v;
        if (v != b[i * d + j]) row.offdiag_match_ok = false;
      }
      if (count != per_row) row.offdiag_count_ok = false;
    }

    report.pass = report.pass && row.commutator_norm <= 1e-12 &&
                  row.identity_residual <= 1e-12 && row.diag_upper_ok &&
                  row.diag_lower_ok && row.offdiag_count_ok &&
                  row.offdiag_match_ok;
    report.per_manifold.push_back(row);
    here = std::move(above);
  }
  return report;
}

std::string to_text(const MsVerificationReport& report) {
  std::ostringstream os;
  os << "factorisation check: N=" << report.n_ions
     << " m=" << report.n_quanta << " (sector dimension "
     << report.sector_dim << ")\n";
  if (report.per_manifold.empty()) {
    os << "  no intermediate manifolds; conditions hold trivially\n";
  } else {
    os << "  mu  commutator  identity  diag_hi  diag_lo  offdiag_count  "
          "offdiag_match\n";
    for (const auto& r : report.per_manifold) {
      os << "  " << r.mu << "   " << r.commutator_norm << "           "
         << r.identity_residual << "         "
         << (r.diag_upper_ok ? "ok" : "FAIL") << "       "
         << (r.diag_lower_ok ? "ok" : "FAIL") << "       "
         << (r.offdiag_count_ok ? "ok" : "FAIL") << "             "
         << (r.offdiag_match_ok ? "ok" : "FAIL") << "\n";
    }
  }
  os << (report.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::vector<double> ladder_couplings(int n_ions, int n_quanta) {
  if (n_ions < 1) throw InvalidArgs("ions must be at least 1");
  if (n_quanta < 1) throw InvalidArgs("excitations must be at least 1");
  if (n_quanta > n_ions)
    throw InvalidArgs("excitations must not exceed ions");
  const int N = n_ions;
  const int m = n_quanta;
  std::vector<double> lambda(m);
  for (int mu = 1; mu <= m; ++mu)
    lambda[mu - 1] =
        0.5 * std::sqrt(double(mu) * (m - mu + 1) * (N - m + mu));
  return lambda;
}

DickeLadder build_dicke_ladder(const BasisPtr& basis) {
  if (!basis) throw InvalidArgs("basis must not be null");
  const int N = basis->n_ions();
  const int m = basis->n_quanta();
  DickeLadder ladder;
  ladder.states.reserve(m + 1);
  ladder.detunings.resize(m + 1);
  for (int level = 0; level <= m; ++level) {
    ladder.states.push_back(dicke_state(basis, level));
    ladder.detunings[level] = (m - 2 * level) / 2.0;
  }
  if (m >= 1) {
    const std::vector<double> lambda = ladder_couplings(N, m);
    ladder.couplings.resize(m);
    for (int g = 0; g < m; ++g) ladder.couplings[g] = lambda[m - g - 1];

    // Self-check: symmetric states are Gram eigenvectors with the row-sum
    // eigenvalue, and the block projection reproduces the couplings.
    for (int mu = 1; mu <= m; ++mu) {
      const GramPair g = gram_products(*basis, mu);
      const long long value = (long long)(m - mu + 1) * (N - m + mu);
      for (std::size_t i = 0; i < g.upper_dim; ++i) {
        long long sum = 0;
        for (std::size_t j = 0; j < g.upper_dim; ++j)
          sum += g.upper[i * g.upper_dim + j];
        if (sum != value)
          throw Error("ladder self-check failed: upper Gram row sum");
      }
      for (std::size_t i = 0; i < g.lower_dim; ++i) {
        long long sum = 0;
        for (std::size_t j = 0; j < g.lower_dim; ++j)
          sum += g.lower[i * g.lower_dim + j];
        if (sum != value)
          throw Error("ladder self-check failed: lower Gram row sum");
      }
      // <sym_mu| V(mu) |sym_{mu-1}> = sqrt((m-mu+1)(N-m+mu)) for unit-norm
      // symmetric vectors on the two manifolds.
      const CouplingBlock block = build_coupling_block(*basis, mu);
      const double projected =
          double(block.entries.size()) /
          std::sqrt(double(block.rows) * double(block.cols));
      if (std::abs(projected - std::sqrt(double(value))) > 1e-12)
        throw Error("ladder self-check failed: block projection");
      const double expected = 2.0 * lambda[mu - 1] / std::sqrt(double(mu));
      if (std::abs(projected - expected) > 1e-12)
        throw Error("ladder self-check failed: coupling mismatch");
    }
  }
  return ladder;
}

}  // namespace dickesim
