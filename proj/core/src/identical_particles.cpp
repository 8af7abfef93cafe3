// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmeas/identical_particles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace qmeas::particles {

using hilbert::MatrixOperator;

namespace {

void require_same_grid(const LatticeGrid& a, const LatticeGrid& b, const char* who) {
  if (!(a == b)) {
    throw GridMismatch(std::string(who) + ": operands live on different grids");
  }
}

bool is_exactly_diagonal(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0)) {
        return false;
      }
    }
  }
  return true;
}

// Plain complex product, skipping the C99 inf/nan recovery in operator*.
inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// out += L X R^T, with a fast path for the diagonal factors that dominate in
// practice (position, delta, multiplication kernels).
void accumulate_sandwich(Matrix& out, const Matrix& left, const Matrix& x, const Matrix& right) {
  const bool left_diag = is_exactly_diagonal(left);
  const bool right_diag = is_exactly_diagonal(right);
  if (left_diag && right_diag) {
    const Index n = x.rows();
    for (Index j = 0; j < n; ++j) {
      const Complex r = right(j, j);
      for (Index i = 0; i < n; ++i) {
        out(i, j) += mul(mul(left(i, i), x(i, j)), r);
      }
    }
  } else if (left_diag) {
    out.noalias() += left.diagonal().asDiagonal() * x * right.transpose();
  } else if (right_diag) {
    out.noalias() += left * x * right.diagonal().asDiagonal();
  } else {
    out.noalias() += left * x * right.transpose();
  }
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// LatticeGrid

LatticeGrid::LatticeGrid(double x_min, double dx, Index n_points)
    : x_min_(x_min), dx_(dx), n_(n_points) {
  if (!std::isfinite(x_min) || !std::isfinite(dx) || !(dx > 0.0)) {
    throw InvalidArgument("LatticeGrid: dx must be finite and positive");
  }
  if (n_points < 2) {
    throw InvalidArgument("LatticeGrid: n_points must be at least 2");
  }
}

LatticeGrid LatticeGrid::spanning(double x_min, double x_max, Index n_points) {
  if (n_points < 2) {
    throw InvalidArgument("LatticeGrid: n_points must be at least 2");
  }
  return LatticeGrid(x_min, (x_max - x_min) / static_cast<double>(n_points - 1), n_points);
}

// ---------------------------------------------------------------------------
// LatticeWavefunction

LatticeWavefunction LatticeWavefunction::from_values(LatticeGrid grid, RawVector values) {
  if (values.size() != grid.n_points()) {
    throw DimensionMismatch("LatticeWavefunction: value count differs from n_points");
  }
  const double norm = grid.dx() * values.squaredNorm();
  if (!(std::abs(norm - 1.0) <= tol::kLatticeNorm)) {
    throw NotNormalized("LatticeWavefunction: quadrature norm is " + sci(norm));
  }
  return LatticeWavefunction(grid, std::move(values));
}

LatticeWavefunction LatticeWavefunction::normalized(LatticeGrid grid, const RawVector& raw) {
  if (raw.size() != grid.n_points()) {
    throw DimensionMismatch("LatticeWavefunction: value count differs from n_points");
  }
  const double norm = std::sqrt(grid.dx() * raw.squaredNorm());
  if (!(norm >= tol::kNullNorm)) {
    throw NullState("LatticeWavefunction: cannot normalize a null vector");
  }
  return LatticeWavefunction(grid, raw / norm);
}

LatticeWavefunction LatticeWavefunction::delta_spike(LatticeGrid grid, Index index) {
  if (index < 0 || index >= grid.n_points()) {
    throw InvalidArgument("delta_spike: index outside grid");
  }
  RawVector v = RawVector::Zero(grid.n_points());
  v(index) = 1.0 / std::sqrt(grid.dx());
  return LatticeWavefunction(grid, std::move(v));
}

Complex LatticeWavefunction::inner(const LatticeWavefunction& other) const {
  require_same_grid(grid_, other.grid_, "LatticeWavefunction::inner");
  return grid_.dx() * values_.dot(other.values_);
}

double LatticeWavefunction::probability_at(Index i) const {
  return grid_.dx() * std::norm(values_(i));
}

const char* to_string(ExchangeSymmetry sym) {
  return sym == ExchangeSymmetry::kBoson ? "boson" : "fermion";
}

// ---------------------------------------------------------------------------
// KernelOperator

KernelOperator KernelOperator::from_kernel(LatticeGrid grid, Matrix kernel, bool hermitian) {
  const Index n = grid.n_points();
  if (kernel.rows() != n || kernel.cols() != n) {
    throw DimensionMismatch("KernelOperator: kernel must be n_points x n_points");
  }
  if (hermitian) {
    const double r = (kernel - kernel.adjoint()).cwiseAbs().maxCoeff();
    if (r > tol::kInvariant) {
      throw InvalidOperator("KernelOperator: kernel is not Hermitian (residual " + sci(r) + ")");
    }
  }
  return KernelOperator(grid, std::move(kernel), hermitian);
}

KernelOperator KernelOperator::multiplication(LatticeGrid grid,
                                              const std::function<double(double)>& f) {
  const Index n = grid.n_points();
  Matrix k = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    k(i, i) = f(grid.coordinate(i)) / grid.dx();
  }
  return KernelOperator(grid, std::move(k), true);
}

KernelOperator KernelOperator::position(LatticeGrid grid) {
  return multiplication(grid, [](double x) { return x; });
}

KernelOperator KernelOperator::identity(LatticeGrid grid) {
  return multiplication(grid, [](double) { return 1.0; });
}

// ---------------------------------------------------------------------------
// TwoParticleKernel

TwoParticleKernel::TwoParticleKernel(LatticeGrid grid, std::vector<Term> terms)
    : grid_(grid), terms_(std::move(terms)) {
  const Index n = grid_.n_points();
  for (const Term& t : terms_) {
    if (t.left.rows() != n || t.left.cols() != n || t.right.rows() != n || t.right.cols() != n) {
      throw DimensionMismatch("TwoParticleKernel: factors must be n_points x n_points");
    }
  }
  const double r = exchange_asymmetry();
  if (r > tol::kInvariant) {
    throw InvalidOperator("TwoParticleKernel: not exchange-symmetric (residual " + sci(r) + ")");
  }
}

Matrix TwoParticleKernel::apply(const Matrix& values) const {
  const Index n = grid_.n_points();
  if (values.rows() != n || values.cols() != n) {
    throw DimensionMismatch("TwoParticleKernel::apply: values must be n_points x n_points");
  }
  Matrix out = Matrix::Zero(n, n);
  for (const Term& t : terms_) {
    accumulate_sandwich(out, t.left, values, t.right);
  }
  return out;
}

double TwoParticleKernel::exchange_asymmetry() const {
  double worst = 0.0;
  for (const Term& t : terms_) {
    double best = std::numeric_limits<double>::infinity();
    for (const Term& s : terms_) {
      const double d = std::max((t.left - s.right).cwiseAbs().maxCoeff(),
                                (t.right - s.left).cwiseAbs().maxCoeff());
      best = std::min(best, d);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

Matrix TwoParticleKernel::dense() const {
  const Index n = grid_.n_points();
  if (n * n > tol::kMaxDenseDim) {
    throw CapacityExceeded("TwoParticleKernel::dense: n_points^2 exceeds the dense cap");
  }
  Matrix out = Matrix::Zero(n * n, n * n);
  for (const Term& t : terms_) {
    out += hilbert::kron(t.left, t.right);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Domain

Domain::Domain(Index n_points, std::vector<Range> ranges)
    : n_(n_points), ranges_(std::move(ranges)) {
  if (n_points <= 0) {
    throw InvalidArgument("Domain: n_points must be positive");
  }
  Index prev_end = 0;
  for (const Range& r : ranges_) {
    if (r.begin < prev_end || r.begin >= r.end || r.end > n_points) {
      throw InvalidArgument("Domain: ranges must be non-empty, sorted, disjoint and inside the grid");
    }
    prev_end = r.end;
  }
}

Domain Domain::from_interval(const LatticeGrid& grid, double lower, double upper) {
  if (!(lower <= upper)) {
    throw InvalidArgument("Domain::from_interval: lower must not exceed upper");
  }
  const double slack = 1e-9 * grid.dx();
  Index begin = -1;
  Index end = -1;
  for (Index i = 0; i < grid.n_points(); ++i) {
    const double x = grid.coordinate(i);
    if (x >= lower - slack && x <= upper + slack) {
      if (begin < 0) {
        begin = i;
      }
      end = i + 1;
    }
  }
  if (begin < 0) {
    return Domain(grid.n_points(), {});
  }
  return Domain(grid.n_points(), {{begin, end}});
}

Domain Domain::full(const LatticeGrid& grid) {
  return Domain(grid.n_points(), {{0, grid.n_points()}});
}

bool Domain::contains(Index i) const {
  return std::any_of(ranges_.begin(), ranges_.end(),
                     [i](const Range& r) { return i >= r.begin && i < r.end; });
}

Index Domain::count() const {
  Index c = 0;
  for (const Range& r : ranges_) {
    c += r.end - r.begin;
  }
  return c;
}

Eigen::VectorXd Domain::indicator() const {
  Eigen::VectorXd chi = Eigen::VectorXd::Zero(n_);
  for (const Range& r : ranges_) {
    chi.segment(r.begin, r.end - r.begin).setOnes();
  }
  return chi;
}

// ---------------------------------------------------------------------------
// Operations

LatticeWavefunction gaussian_packet(const LatticeGrid& grid, double center, double width) {
  if (!std::isfinite(width) || !(width > 2.0 * grid.dx())) {
    throw UnresolvableWidth("gaussian_packet: width must exceed 2 dx = " + sci(2.0 * grid.dx()));
  }
  if (!std::isfinite(center) || center < grid.x_min() || center > grid.x_max()) {
    throw InvalidArgument("gaussian_packet: center outside the grid");
  }
  RawVector v(grid.n_points());
  const double denom = 4.0 * width * width;
  for (Index i = 0; i < grid.n_points(); ++i) {
    const double d = grid.coordinate(i) - center;
    v(i) = std::exp(-d * d / denom);
  }
  return LatticeWavefunction::normalized(grid, v);
}

TwoParticleWavefunction symmetrize(const LatticeWavefunction& psi,
                                   const LatticeWavefunction& phi,
                                   ExchangeSymmetry sym) {
  require_same_grid(psi.grid(), phi.grid(), "symmetrize");
  const LatticeGrid& grid = psi.grid();
  const Index n = grid.n_points();
  const RawVector& a = psi.values();
  const RawVector& b = phi.values();
  const bool fermion = sym == ExchangeSymmetry::kFermion;

  Matrix raw(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      const Complex direct = a(i) * b(j);
      const Complex swapped = b(i) * a(j);
      raw(i, j) = fermion ? direct - swapped : direct + swapped;
    }
  }
  double sq = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      sq += 2.0 * std::norm(raw(i, j));
    }
    sq += std::norm(raw(j, j));
  }
  const double norm = std::sqrt(grid.dx() * grid.dx() * sq);
  if (!(norm >= tol::kNullNorm)) {
    throw NullState("symmetrize: symmetrized state vanishes");
  }
  const double nu = 1.0 / norm;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      raw(i, j) *= nu;
      raw(j, i) = fermion ? -raw(i, j) : raw(i, j);
    }
  }
  return TwoParticleWavefunction(grid, std::move(raw), sym, nu);
}

TwoParticleKernel symmetrized_observable(const KernelOperator& a) {
  const LatticeGrid& grid = a.grid();
  const Index n = grid.n_points();
  const Matrix delta = Matrix::Identity(n, n) / grid.dx();
  std::vector<TwoParticleKernel::Term> terms;
  terms.push_back({a.kernel(), delta});
  terms.push_back({delta, a.kernel()});
  return TwoParticleKernel(grid, std::move(terms));
}

Complex expectation_single(const KernelOperator& a, const LatticeWavefunction& psi) {
  require_same_grid(a.grid(), psi.grid(), "expectation_single");
  const double dx = a.grid().dx();
  return dx * dx * psi.values().dot(a.kernel() * psi.values());
}

Complex expectation_two_particle(const TwoParticleKernel& a,
                                 const TwoParticleWavefunction& psi) {
  require_same_grid(a.grid(), psi.grid(), "expectation_two_particle");
  const double dx = a.grid().dx();
  const Matrix applied = a.apply(psi.values());
  const Complex s = (psi.values().conjugate().cwiseProduct(applied)).sum();
  return dx * dx * dx * dx * s;
}

KernelOperator localize(const KernelOperator& a, const Domain& domain) {
  const Index n = a.grid().n_points();
  if (domain.n_points() != n) {
    throw GridMismatch("localize: domain and kernel disagree on n_points");
  }
  Matrix k = a.kernel();
  for (Index i = 0; i < n; ++i) {
    if (!domain.contains(i)) {
      k.row(i).setZero();
      k.col(i).setZero();
    }
  }
  return KernelOperator::from_kernel(a.grid(), std::move(k), a.is_hermitian());
}

double d_locality_residual(const KernelOperator& a, const Domain& domain) {
  const Index n = a.grid().n_points();
  if (domain.n_points() != n) {
    throw GridMismatch("d_locality_residual: domain and kernel disagree on n_points");
  }
  const double dx = a.grid().dx();
  double worst = 0.0;
  for (Index e = 0; e < n; ++e) {
    if (domain.contains(e)) {
      continue;
    }
    const double col = dx * a.kernel().col(e).cwiseAbs().sum();
    const double row = dx * a.kernel().row(e).cwiseAbs().sum();
    worst = std::max({worst, col, row});
  }
  return worst;
}

bool is_d_local(const KernelOperator& a, const Domain& domain, double tolerance) {
  if (!(tolerance >= 0.0)) {
    throw InvalidArgument("is_d_local: tolerance must be non-negative");
  }
  return d_locality_residual(a, domain) <= tolerance;
}

double mass_outside(const LatticeWavefunction& psi, const Domain& domain) {
  if (domain.n_points() != psi.grid().n_points()) {
    throw GridMismatch("mass_outside: domain and wavefunction disagree on n_points");
  }
  double m = 0.0;
  for (Index i = 0; i < psi.grid().n_points(); ++i) {
    if (!domain.contains(i)) {
      m += psi.probability_at(i);
    }
  }
  return m;
}

AgreementResult dlocal_agreement_check(const KernelOperator& a, const Domain& domain,
                                       const LatticeWavefunction& psi,
                                       const LatticeWavefunction& phi, ExchangeSymmetry sym,
                                       double support_mass_epsilon) {
  require_same_grid(a.grid(), psi.grid(), "dlocal_agreement_check");
  require_same_grid(a.grid(), phi.grid(), "dlocal_agreement_check");
  const double psi_leak = mass_outside(psi, domain);
  if (psi_leak > support_mass_epsilon) {
    throw SupportViolation("dlocal_agreement_check: psi has mass " + sci(psi_leak) +
                           " outside D (allowed " + sci(support_mass_epsilon) + ")");
  }
  const double phi_total = phi.grid().dx() * phi.values().squaredNorm();
  const double phi_inside = phi_total - mass_outside(phi, domain);
  if (phi_inside > support_mass_epsilon) {
    throw SupportViolation("dlocal_agreement_check: phi has mass " + sci(phi_inside) +
                           " inside D (allowed " + sci(support_mass_epsilon) + ")");
  }
  AgreementResult r;
  r.two_particle =
      expectation_two_particle(symmetrized_observable(localize(a, domain)), symmetrize(psi, phi, sym));
  r.single = expectation_single(a, psi);
  r.difference = std::abs(r.two_particle - r.single);
  return r;
}

Domain support(const LatticeWavefunction& psi, double mass_epsilon) {
  if (!(mass_epsilon > 0.0 && mass_epsilon < 1.0)) {
    throw InvalidArgument("support: mass_epsilon must lie in (0, 1)");
  }
  const Index n = psi.grid().n_points();
  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (Index i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + psi.probability_at(i);
  }
  const double total = prefix[n];
  const double allowed_outside = mass_epsilon * total;

  Index best_begin = 0;
  Index best_end = n;
  Index end = 0;
  for (Index begin = 0; begin < n; ++begin) {
    end = std::max(end, begin + 1);
    while (end <= n && total - (prefix[end] - prefix[begin]) > allowed_outside) {
      ++end;
    }
    if (end > n) {
      break;
    }
    if (end - begin < best_end - best_begin) {
      best_begin = begin;
      best_end = end;
    }
  }
  return Domain(n, {{best_begin, best_end}});
}

MatrixOperator collective_observable(const MatrixOperator& a, int n_particles) {
  if (n_particles < 1) {
    throw InvalidArgument("collective_observable: n_particles must be positive");
  }
  const Index d = a.dim();
  Index total = 1;
  for (int k = 0; k < n_particles; ++k) {
    if (total > tol::kMaxDenseDim / d) {
      throw CapacityExceeded("collective_observable: dim^n exceeds " +
                             std::to_string(tol::kMaxDenseDim));
    }
    total *= d;
  }
  Matrix out = Matrix::Zero(total, total);
  Index before = 1;
  for (int k = 0; k < n_particles; ++k) {
    const Index after = total / (before * d);
    out += hilbert::kron(Matrix::Identity(before, before),
                         hilbert::kron(a.entries(), Matrix::Identity(after, after)));
    before *= d;
  }
  if (a.is_hermitian()) {
    return MatrixOperator::hermitian(std::move(out));
  }
  return MatrixOperator::general(std::move(out));
}

MatrixOperator exchange_operator(Index dim) {
  if (dim <= 0) {
    throw InvalidArgument("exchange_operator: dim must be positive");
  }
  Matrix s = Matrix::Zero(dim * dim, dim * dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) {
      s(j * dim + i, i * dim + j) = 1.0;
    }
  }
  return MatrixOperator::unitary(std::move(s));
}

}  // namespace qmeas::particles
