#include "envalg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "envalg/errors.hpp"

namespace envalg {

void Tolerance::validate() const {
  if (!(rank_rel > 0.0 && rank_rel < 1.0)) {
    throw InputError("tolerance rank_rel must lie in (0, 1), got " + std::to_string(rank_rel));
  }
  if (!(eq_abs > 0.0 && eq_abs < 1.0)) {
    throw InputError("tolerance eq_abs must lie in (0, 1), got " + std::to_string(eq_abs));
  }
}

BipartiteOperator::BipartiteOperator(std::size_t sys_dim, std::size_t env_dim, ComplexMatrix matrix,
                                     OperatorKind kind, const Tolerance& tol)
    : sys_dim_(sys_dim), env_dim_(env_dim), matrix_(std::move(matrix)), kind_(kind) {
  if (sys_dim_ == 0 || env_dim_ == 0) {
    throw DimensionError("bipartite operator needs positive dimensions");
  }
  const auto n = static_cast<Eigen::Index>(sys_dim_ * env_dim_);
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw DimensionError("bipartite operator must be " + std::to_string(n) + "x" + std::to_string(n) +
                         ", got " + std::to_string(matrix_.rows()) + "x" +
                         std::to_string(matrix_.cols()));
  }
  if (!matrix_.allFinite()) {
    throw InputError("bipartite operator has non-finite entries");
  }
  if (kind_ == OperatorKind::unitary) {
    const double r = unitarity_residual();
    if (r > tol.eq_abs) {
      throw InputError("operator is not unitary: ||U^dagger U - I|| = " + std::to_string(r));
    }
  } else if (kind_ == OperatorKind::hermitian) {
    const double r = hermiticity_residual();
    if (r > tol.eq_abs) {
      throw InputError("operator is not Hermitian: ||H - H^dagger|| = " + std::to_string(r));
    }
  }
}

ComplexMatrix BipartiteOperator::block(std::size_t i, std::size_t j) const {
  if (i >= sys_dim_ || j >= sys_dim_) {
    throw DimensionError("block index out of range");
  }
  const auto d = static_cast<Eigen::Index>(env_dim_);
  return matrix_.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d);
}

BipartiteOperator BipartiteOperator::adjoint() const {
  BipartiteOperator out;
  out.sys_dim_ = sys_dim_;
  out.env_dim_ = env_dim_;
  out.matrix_ = matrix_.adjoint();
  out.kind_ = kind_;
  return out;
}

double BipartiteOperator::unitarity_residual() const {
  return (matrix_.adjoint() * matrix_ - ComplexMatrix::Identity(matrix_.rows(), matrix_.cols())).norm();
}

double BipartiteOperator::hermiticity_residual() const {
  return (matrix_ - matrix_.adjoint()).norm();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace_weighted(const BipartiteOperator& m, const ComplexMatrix& weight) {
  const auto n = static_cast<Eigen::Index>(m.sys_dim());
  const auto d = static_cast<Eigen::Index>(m.env_dim());
  if (weight.rows() != d || weight.cols() != d) {
    throw DimensionError("environment weight must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  const ComplexMatrix& a = m.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index l = 0; l < d; ++l) {
          acc += a(i * d + k, j * d + l) * weight(l, k);
        }
      }
      out(i, j) = acc;
    }
  }
  return out;
}

ComplexMatrix partial_trace_env(const BipartiteOperator& m) {
  return partial_trace_weighted(m, identity(m.env_dim()));
}

ComplexMatrix partial_trace_sys_weighted(const BipartiteOperator& m, const ComplexMatrix& weight) {
  const auto n = static_cast<Eigen::Index>(m.sys_dim());
  const auto d = static_cast<Eigen::Index>(m.env_dim());
  if (weight.rows() != n || weight.cols() != n) {
    throw DimensionError("system weight must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  const ComplexMatrix& a = m.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (weight(j, i) == Complex(0.0)) continue;
      out += weight(j, i) * a.block(i * d, j * d, d, d);
    }
  }
  return out;
}

ComplexMatrix partial_trace_sys(const BipartiteOperator& m) {
  return partial_trace_sys_weighted(m, identity(m.sys_dim()));
}

HermitianEigen eig_hermitian(const ComplexMatrix& a, const Tolerance& tol) {
  if (a.rows() != a.cols()) {
    throw DimensionError("eig_hermitian needs a square matrix");
  }
  const double skew = (a - a.adjoint()).norm();
  if (skew > tol.eq_abs * std::max(1.0, a.norm())) {
    throw InputError("eig_hermitian: input is not Hermitian (||A - A^dagger|| = " +
                     std::to_string(skew) + ")");
  }
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericalFault("eig_hermitian: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Svd svd(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

double rank_threshold(double sigma_max, const Tolerance& tol) {
  if (sigma_max <= tol.eq_abs) return sigma_max;
  return tol.rank_rel * sigma_max;
}

namespace {

std::size_t count_above(const RealVector& sigma, const Tolerance& tol) {
  if (sigma.size() == 0) return 0;
  const double smax = sigma.maxCoeff();
  if (smax <= tol.eq_abs) return 0;
  const double thr = rank_threshold(smax, tol);
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > thr) ++r;
  }
  return r;
}

double relative_floor(const ComplexVector& v, double rel) {
  const double m = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  return rel * m;
}

}  // namespace

std::size_t numerical_rank(const ComplexMatrix& a, const Tolerance& tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> solver(a);
  return count_above(solver.singularValues(), tol);
}

ComplexMatrix nullspace(const ComplexMatrix& a, const Tolerance& tol) {
  StackedNullspace acc(static_cast<std::size_t>(a.cols()));
  acc.add_rows(a);
  return acc.solve(tol);
}

StackedNullspace::StackedNullspace(std::size_t cols)
    : cols_(cols), r_(0, static_cast<Eigen::Index>(cols)) {}

void StackedNullspace::add_rows(const ComplexMatrix& rows) {
  const auto n = static_cast<Eigen::Index>(cols_);
  if (rows.cols() != n) {
    throw DimensionError("stacked nullspace: row block has wrong column count");
  }
  if (rows.rows() == 0) return;
  ComplexMatrix stacked(r_.rows() + rows.rows(), n);
  stacked << r_, rows;
  if (stacked.rows() <= n) {
    r_ = std::move(stacked);
    return;
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(stacked);
  r_ = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
}

RealVector StackedNullspace::singular_values() const {
  const auto n = static_cast<Eigen::Index>(cols_);
  ComplexMatrix square = ComplexMatrix::Zero(n, n);
  square.topRows(r_.rows()) = r_;
  Eigen::JacobiSVD<ComplexMatrix> solver(square);
  return solver.singularValues();
}

ComplexMatrix StackedNullspace::solve(const Tolerance& tol) const {
  const auto n = static_cast<Eigen::Index>(cols_);
  if (n == 0) return ComplexMatrix(0, 0);
  ComplexMatrix square = ComplexMatrix::Zero(n, n);
  square.topRows(r_.rows()) = r_;
  Eigen::JacobiSVD<ComplexMatrix> solver(square, Eigen::ComputeFullV);
  const RealVector& sigma = solver.singularValues();
  const std::size_t rank = count_above(sigma, tol);
  ComplexMatrix out = solver.matrixV().rightCols(n - static_cast<Eigen::Index>(rank));
  for (Eigen::Index k = 0; k < out.cols(); ++k) {
    normalize_phase(out.col(k), relative_floor(out.col(k), 1e-8));
  }
  return out;
}

ComplexVector vec(const ComplexMatrix& x) {
  return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

ComplexMatrix unvec(const ComplexVector& v, std::size_t rows, std::size_t cols) {
  if (static_cast<std::size_t>(v.size()) != rows * cols) {
    throw DimensionError("unvec: length mismatch");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), static_cast<Eigen::Index>(rows),
                                         static_cast<Eigen::Index>(cols));
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace();
}

ComplexMatrix extend_orthonormal(const ComplexMatrix& basis, const ComplexMatrix& candidates,
                                 const Tolerance& tol) {
  if (candidates.cols() == 0) return basis;
  if (basis.cols() > 0 && basis.rows() != candidates.rows()) {
    throw DimensionError("extend_orthonormal: row mismatch");
  }
  double scale = basis.cols() > 0 ? 1.0 : 0.0;
  for (Eigen::Index k = 0; k < candidates.cols(); ++k) {
    scale = std::max(scale, candidates.col(k).norm());
  }
  if (scale <= tol.eq_abs) return basis;

  ComplexMatrix resid = candidates;
  if (basis.cols() > 0) {
    resid -= basis * (basis.adjoint() * resid);
    resid -= basis * (basis.adjoint() * resid);
  }
  Eigen::JacobiSVD<ComplexMatrix> solver(resid, Eigen::ComputeThinU);
  const RealVector& sigma = solver.singularValues();
  const double thr = tol.rank_rel * scale;
  Eigen::Index keep = 0;
  while (keep < sigma.size() && sigma(keep) > thr) ++keep;
  if (keep == 0) return basis;

  ComplexMatrix fresh = solver.matrixU().leftCols(keep);
  if (basis.cols() > 0) {
    fresh -= basis * (basis.adjoint() * fresh);
  }
  // Re-orthonormalize the new block among itself after the projection.
  Eigen::HouseholderQR<ComplexMatrix> qr(fresh);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(fresh.rows(), keep);
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    normalize_phase(q.col(k), relative_floor(q.col(k), 1e-8));
  }
  ComplexMatrix out(candidates.rows(), basis.cols() + keep);
  if (basis.cols() > 0) out.leftCols(basis.cols()) = basis;
  out.rightCols(keep) = q;
  return out;
}

ComplexMatrix orthonormal_span(const ComplexMatrix& a, const Tolerance& tol) {
  return extend_orthonormal(ComplexMatrix(a.rows(), 0), a, tol);
}

ComplexMatrix stack_vecs(std::span<const ComplexMatrix> mats) {
  if (mats.empty()) return ComplexMatrix(0, 0);
  const auto len = mats.front().size();
  ComplexMatrix out(len, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t k = 0; k < mats.size(); ++k) {
    if (mats[k].size() != len) {
      throw DimensionError("stack_vecs: matrices of different size");
    }
    out.col(static_cast<Eigen::Index>(k)) = vec(mats[k]);
  }
  return out;
}

std::vector<ComplexMatrix> hs_orthonormalize(std::span<const ComplexMatrix> mats,
                                             const Tolerance& tol) {
  std::vector<ComplexMatrix> out;
  if (mats.empty()) return out;
  const auto rows = static_cast<std::size_t>(mats.front().rows());
  const auto cols = static_cast<std::size_t>(mats.front().cols());
  const ComplexMatrix q = orthonormal_span(stack_vecs(mats), tol);
  out.reserve(static_cast<std::size_t>(q.cols()));
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    out.push_back(unvec(q.col(k), rows, cols));
  }
  return out;
}

double containment_residual(const ComplexMatrix& inner, const ComplexMatrix& outer) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < inner.cols(); ++k) {
    ComplexVector r = inner.col(k);
    if (outer.cols() > 0) r -= outer * (outer.adjoint() * r);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

double subspace_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  return std::max(containment_residual(a, b), containment_residual(b, a));
}

void normalize_phase(Eigen::Ref<ComplexVector> v, double floor) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > floor) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(std::abs(v(i)), 0.0);
      return;
    }
  }
}

ComplexMatrix range_basis(const ComplexMatrix& projection, const Tolerance& tol) {
  const auto d = projection.rows();
  const auto rank = static_cast<Eigen::Index>(std::llround(projection.trace().real()));
  ComplexMatrix q(d, 0);
  std::vector<bool> used(static_cast<std::size_t>(d), false);
  while (q.cols() < rank) {
    // Residuals of the canonical images outside the current span.
    std::vector<ComplexVector> cand(static_cast<std::size_t>(d));
    double best = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      ComplexVector v = projection.col(j);
      if (q.cols() > 0) {
        v -= q * (q.adjoint() * v);
        v -= q * (q.adjoint() * v);
      }
      best = std::max(best, v.norm());
      cand[static_cast<std::size_t>(j)] = std::move(v);
    }
    if (best <= std::sqrt(tol.eq_abs)) break;
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (used[ju] || cand[ju].norm() < 0.5 * best) continue;
      ComplexVector v = cand[ju] / cand[ju].norm();
      normalize_phase(v, 1e-8);
      q.conservativeResize(Eigen::NoChange, q.cols() + 1);
      q.col(q.cols() - 1) = v;
      used[ju] = true;
      break;
    }
  }
  return q;
}

ComplexMatrix projector(const ComplexMatrix& q) {
  return q * q.adjoint();
}

ComplexMatrix identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return ComplexMatrix::Identity(k, k);
}

ComplexMatrix matrix_unit(std::size_t n, std::size_t i, std::size_t j) {
  const auto k = static_cast<Eigen::Index>(n);
  ComplexMatrix e = ComplexMatrix::Zero(k, k);
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

ComplexVector basis_vector(std::size_t n, std::size_t i) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a * b - b * a).norm();
}

}  // namespace envalg
