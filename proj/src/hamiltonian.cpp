#include "dickesim/hamiltonian.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace dickesim {

CouplingBlock build_coupling_block(const SectorBasis& basis, int mu) {
  if (mu < 1 || mu > basis.n_quanta())
    throw InvalidArgs("coupling block manifold must be between 1 and the "
                      "sector's quantum number");
  CouplingBlock block;
  block.mu = mu;
  block.rows = basis.manifold_dim(mu);
  block.cols = basis.manifold_dim(mu - 1);
  const std::size_t row_base = basis.manifold_begin(mu);
  const std::size_t col_base = basis.manifold_begin(mu - 1);
  const int n = basis.n_ions();
  block.entries.reserve(block.rows * (n - basis.n_quanta() + mu));
  for (std::size_t r = 0; r < block.rows; ++r) {
    const IonPattern p = basis.state_at(row_base + r).ions;
    for (int j = 0; j < n; ++j) {
      if ((p >> j) & 1u) continue;
      const std::size_t c =
          basis.index_of(p | (IonPattern{1} << j), mu - 1) - col_base;
      block.entries.push_back({static_cast<std::uint32_t>(r),
                               static_cast<std::uint32_t>(c),
                               static_cast<std::uint16_t>(j)});
    }
  }
  return block;
}

namespace {

std::shared_ptr<const std::vector<CouplingBlock>> build_blocks(
    const SectorBasis& basis) {
  auto blocks = std::make_shared<std::vector<CouplingBlock>>();
  blocks->reserve(basis.n_quanta());
  for (int mu = 1; mu <= basis.n_quanta(); ++mu)
    blocks->push_back(build_coupling_block(basis, mu));
  return blocks;
}

}  // namespace

HamiltonianOperator::HamiltonianOperator(BasisPtr basis)
    : HamiltonianOperator(
          basis, basis ? std::vector<double>(basis->n_ions(), 1.0)
                       : std::vector<double>{}) {}

HamiltonianOperator::HamiltonianOperator(BasisPtr basis,
                                         std::vector<double> gains)
    : basis_(std::move(basis)) {
  if (!basis_) throw InvalidArgs("basis must not be null");
  blocks_ = build_blocks(*basis_);
  gains_ = std::move(gains);
  if (gains_.size() != static_cast<std::size_t>(basis_->n_ions()))
    throw InvalidArgs("gains must list one multiplier per ion");
  build_adjacency();
}

HamiltonianOperator::HamiltonianOperator(
    BasisPtr basis, std::shared_ptr<const std::vector<CouplingBlock>> blocks,
    std::vector<double> gains)
    : basis_(std::move(basis)),
      blocks_(std::move(blocks)),
      gains_(std::move(gains)) {
  if (gains_.size() != static_cast<std::size_t>(basis_->n_ions()))
    throw InvalidArgs("gains must list one multiplier per ion");
  build_adjacency();
}

HamiltonianOperator HamiltonianOperator::with_gains(
    std::vector<double> gains) const {
  return HamiltonianOperator(basis_, blocks_, std::move(gains));
}

void HamiltonianOperator::build_adjacency() {
  const std::size_t dim = basis_->dim();
  const int m = basis_->n_quanta();
  diag_coeff_.resize(dim);
  for (std::size_t i = 0; i < dim; ++i)
    diag_coeff_[i] = (2 * basis_->manifold_of(i) - m) / 2.0;

  std::vector<std::size_t> degree(dim, 0);
  for (const CouplingBlock& b : *blocks_) {
    const std::size_t row_base = basis_->manifold_begin(b.mu);
    const std::size_t col_base = basis_->manifold_begin(b.mu - 1);
    for (const auto& e : b.entries) {
      ++degree[row_base + e.row];
      ++degree[col_base + e.col];
    }
  }
  row_ptr_.assign(dim + 1, 0);
  for (std::size_t i = 0; i < dim; ++i) row_ptr_[i + 1] = row_ptr_[i] + degree[i];
  neighbors_.resize(row_ptr_[dim]);
  std::vector<std::size_t> fill(row_ptr_.begin(), row_ptr_.end() - 1);
  for (const CouplingBlock& b : *blocks_) {
    const std::size_t row_base = basis_->manifold_begin(b.mu);
    const std::size_t col_base = basis_->manifold_begin(b.mu - 1);
    const double half_sqrt_mu = std::sqrt(double(b.mu)) / 2.0;
    for (const auto& e : b.entries) {
      const std::size_t gr = row_base + e.row;
      const std::size_t gc = col_base + e.col;
      const double w = gains_[e.ion] * half_sqrt_mu;
      neighbors_[fill[gr]++] = {static_cast<std::uint32_t>(gc), w};
      neighbors_[fill[gc]++] = {static_cast<std::uint32_t>(gr), w};
    }
  }
}

void HamiltonianOperator::apply(double omegaT, double deltaT,
                                std::span<const std::complex<double>> x,
                                std::span<std::complex<double>> y) const {
  const std::size_t dim = basis_->dim();
  if (x.size() != dim || y.size() != dim)
    throw BasisMismatch("vector length does not match the sector dimension");
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dim);
#pragma omp parallel for schedule(static) if (dim >= kParallelCutoff)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      acc += neighbors_[k].weight * x[neighbors_[k].index];
    y[i] = deltaT * diag_coeff_[i] * x[i] + omegaT * acc;
  }
}

void HamiltonianOperator::apply_serial(
    double omegaT, double deltaT, std::span<const std::complex<double>> x,
    std::span<std::complex<double>> y) const {
  const std::size_t dim = basis_->dim();
  if (x.size() != dim || y.size() != dim)
    throw BasisMismatch("vector length does not match the sector dimension");
  for (std::size_t i = 0; i < dim; ++i) y[i] = deltaT * diag_coeff_[i] * x[i];
  for (const CouplingBlock& b : *blocks_) {
    const std::size_t row_base = basis_->manifold_begin(b.mu);
    const std::size_t col_base = basis_->manifold_begin(b.mu - 1);
    const double half_sqrt_mu = std::sqrt(double(b.mu)) / 2.0;
    for (const auto& e : b.entries) {
      const double w = omegaT * gains_[e.ion] * half_sqrt_mu;
      y[row_base + e.row] += w * x[col_base + e.col];
      y[col_base + e.col] += w * x[row_base + e.row];
    }
  }
}

Eigen::MatrixXd HamiltonianOperator::dense(double omegaT, double deltaT) const {
  const std::size_t dim = basis_->dim();
  if (dim > kDenseCap)
    throw DimensionCap("dense materialisation limited to dimension " +
                       std::to_string(kDenseCap));
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) h(i, i) = deltaT * diag_coeff_[i];
  for (const CouplingBlock& b : *blocks_) {
    const std::size_t row_base = basis_->manifold_begin(b.mu);
    const std::size_t col_base = basis_->manifold_begin(b.mu - 1);
    const double half_sqrt_mu = std::sqrt(double(b.mu)) / 2.0;
    for (const auto& e : b.entries) {
      const double w = omegaT * gains_[e.ion] * half_sqrt_mu;
      h(row_base + e.row, col_base + e.col) += w;
      h(col_base + e.col, row_base + e.row) += w;
    }
  }
  return h;
}

StateVector apply_hamiltonian(const HamiltonianOperator& op, double tau,
                              const PulseParams& pulse,
                              const StateVector& psi) {
  if (!psi.basis || !(*psi.basis == op.basis()))
    throw BasisMismatch("state does not live on the operator's sector");
  StateVector out{psi.basis,
                  std::vector<std::complex<double>>(psi.amp.size())};
  op.apply(omega(pulse, tau), delta(pulse, tau), psi.amp, out.amp);
  return out;
}

}  // namespace dickesim
