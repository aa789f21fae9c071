#include "envalg/dipole.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "envalg/environment.hpp"
#include "envalg/errors.hpp"

namespace envalg {

void DipoleModel::validate(const Tolerance& tol) const {
  const auto n = h_s.rows();
  if (n == 0 || h_s.cols() != n) {
    throw DimensionError("dipole model: H_S must be a non-empty square matrix");
  }
  if (couplings.empty()) {
    throw DimensionError("dipole model needs at least one coupling (d >= 1)");
  }
  if (!h_s.allFinite()) throw InputError("dipole model: H_S has non-finite entries");
  const double herm = (h_s - h_s.adjoint()).norm();
  if (herm > tol.eq_abs) {
    throw InputError("dipole model: H_S is not Hermitian (||H_S - H_S^dagger|| = " +
                     std::to_string(herm) + ")");
  }
  for (std::size_t k = 0; k < couplings.size(); ++k) {
    if (couplings[k].rows() != n || couplings[k].cols() != n) {
      throw DimensionError("dipole model: coupling " + std::to_string(k + 1) + " is not " +
                           std::to_string(n) + "x" + std::to_string(n));
    }
    if (!couplings[k].allFinite()) {
      throw InputError("dipole model: coupling " + std::to_string(k + 1) + " has non-finite entries");
    }
  }
  const auto de = static_cast<Eigen::Index>(env_dim());
  if (h_e.size() != 0 && (h_e.rows() != de || h_e.cols() != de)) {
    throw DimensionError("dipole model: H_E must be " + std::to_string(de) + "x" + std::to_string(de));
  }
}

BipartiteOperator DipoleModel::hamiltonian(const Tolerance& tol) const {
  validate(tol);
  const std::size_t n = sys_dim();
  const std::size_t de = env_dim();
  ComplexMatrix h = kron(h_s, identity(de));
  if (h_e.size() != 0) h += kron(identity(n), h_e);
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    h += kron(couplings[i], matrix_unit(de, i + 1, 0));
    h += kron(couplings[i].adjoint(), matrix_unit(de, 0, i + 1));
  }
  return BipartiteOperator(n, de, std::move(h), OperatorKind::hermitian, tol);
}

DipoleReduction dipole_reduce(std::span<const ComplexMatrix> couplings, const Tolerance& tol) {
  if (couplings.empty()) {
    throw DimensionError("dipole_reduce needs at least one coupling");
  }
  const auto d = static_cast<Eigen::Index>(couplings.size());
  const ComplexMatrix a = stack_vecs(couplings);
  DipoleReduction r;
  r.m = numerical_rank(a, tol);
  if (r.m == 0 || r.m == couplings.size()) {
    r.w = ComplexMatrix::Identity(d, d);
  } else {
    ComplexMatrix y = svd(a).v;
    for (Eigen::Index k = 0; k < y.cols(); ++k) normalize_phase(y.col(k), 1e-8);
    r.w = y.conjugate();
  }
  const ComplexMatrix transformed = a * r.w.conjugate();
  const auto n = static_cast<std::size_t>(couplings.front().rows());
  for (Eigen::Index k = 0; k < d; ++k) {
    r.transformed.push_back(unvec(transformed.col(k), n, n));
    if (static_cast<std::size_t>(k) >= r.m) {
      r.tail_norm = std::max(r.tail_norm, r.transformed.back().norm());
    }
  }
  return r;
}

ComplexMatrix dipole_environment_matrix(double theta, const ComplexVector& a) {
  const auto d = a.size();
  ComplexMatrix m = ComplexMatrix::Zero(d + 1, d + 1);
  const Complex half = std::polar(1.0, 0.5 * theta);
  for (Eigen::Index i = 0; i < d; ++i) {
    m(i + 1, 0) = std::conj(half) * a(i);
    m(0, i + 1) = half * std::conj(a(i));
  }
  return m;
}

ClassificationResult dipole_classify(const DipoleModel& model, const Tolerance& tol) {
  model.validate(tol);
  if (model.h_e.size() != 0 && model.h_e.norm() > tol.eq_abs) {
    throw InputError("dipole_classify requires H_E = 0");
  }
  const BipartiteOperator h = model.hamiltonian(tol);
  const std::size_t d = model.coupling_count();
  const auto de = static_cast<Eigen::Index>(d + 1);

  ClassificationResult out;
  out.reduction = dipole_reduce(model.couplings, tol);
  out.algebra = environment_algebra(h, tol);
  out.commutativity_defect = commutativity_defect(out.algebra);
  const std::size_t m = out.reduction.m;

  bool rank_one = m == 0;
  Complex ratio(0.0, 0.0);
  if (m == 1) {
    const ComplexMatrix& v = out.reduction.transformed.front();
    const double vn = v.norm();
    ratio = hs_inner(v, v.adjoint()) / (vn * vn);
    out.ratio_residual = (v.adjoint() - ratio * v).norm() / vn;
    rank_one = out.ratio_residual <= tol.eq_abs && std::abs(std::abs(ratio) - 1.0) <= tol.eq_abs;
  }

  if (rank_one) {
    out.case_tag = DipoleCase::commutative_rank_one;
    if (m == 1) {
      out.theta = std::arg(ratio);
      out.a = out.reduction.w.col(0);
      const ComplexMatrix env = dipole_environment_matrix(out.theta, out.a);
      const ComplexMatrix normal = kron(model.h_s, identity(d + 1)) +
                                   std::polar(1.0, 0.5 * out.theta) *
                                       kron(out.reduction.transformed.front(), env);
      out.reconstruction_residual = (h.matrix() - normal).norm();
      const ComplexMatrix gens[] = {env};
      out.algebra_residual = subspace_residual(out.algebra, generate_algebra(d + 1, gens, tol));
    } else {
      out.a = ComplexVector::Zero(static_cast<Eigen::Index>(d));
      out.reconstruction_residual = (h.matrix() - kron(model.h_s, identity(d + 1))).norm();
      out.algebra_residual = subspace_residual(out.algebra, StarAlgebra::scalars(d + 1));
    }
    return out;
  }

  out.case_tag = DipoleCase::block_split;
  const auto mi = static_cast<Eigen::Index>(m);
  ComplexMatrix embedded = ComplexMatrix::Zero(de, de);
  embedded(0, 0) = 1.0;
  embedded.bottomRightCorner(de - 1, de - 1) = out.reduction.w;
  out.k1_basis = embedded.leftCols(mi + 1);
  out.k2_basis = embedded.rightCols(de - 1 - mi);

  std::vector<ComplexMatrix> predicted;
  for (Eigen::Index i = 0; i <= mi; ++i) {
    for (Eigen::Index j = 0; j <= mi; ++j) {
      predicted.push_back(out.k1_basis.col(i) * out.k1_basis.col(j).adjoint());
    }
  }
  if (out.k2_basis.cols() > 0) predicted.push_back(projector(out.k2_basis));
  const StarAlgebra expected(d + 1, orthonormal_span(stack_vecs(predicted), tol));
  out.algebra_residual = subspace_residual(out.algebra, expected);
  return out;
}

}  // namespace envalg
