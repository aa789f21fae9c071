#include "envalg/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "envalg/errors.hpp"

namespace envalg {

ComplexMatrix BlockFamily::reconstruct() const {
  const auto n = static_cast<Eigen::Index>(sys_dim);
  const auto d = static_cast<Eigen::Index>(env_dim);
  ComplexMatrix out(n * d, n * d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.block(i * d, j * d, d, d) = blocks[static_cast<std::size_t>(i * n + j)];
    }
  }
  return out;
}

BlockFamily env_blocks(const BipartiteOperator& m) {
  BlockFamily f;
  f.sys_dim = m.sys_dim();
  f.env_dim = m.env_dim();
  const BipartiteOperator adj = m.adjoint();
  const std::size_t n = f.sys_dim;
  f.blocks.reserve(n * n);
  f.adjoint_blocks.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const ComplexMatrix g = matrix_unit(n, j, i);
      f.blocks.push_back(partial_trace_sys_weighted(m, g));
      f.adjoint_blocks.push_back(partial_trace_sys_weighted(adj, g));
    }
  }
  return f;
}

StarAlgebra environment_algebra(const BipartiteOperator& m, const Tolerance& tol) {
  const BlockFamily f = env_blocks(m);
  std::vector<ComplexMatrix> gens = f.blocks;
  if (m.kind() != OperatorKind::hermitian) {
    gens.insert(gens.end(), f.adjoint_blocks.begin(), f.adjoint_blocks.end());
  }
  return generate_algebra(f.env_dim, gens, tol);
}

double block_membership_residual(const BipartiteOperator& m, const StarAlgebra& alg) {
  const BlockFamily f = env_blocks(m);
  double worst = 0.0;
  for (const auto& b : f.blocks) worst = std::max(worst, alg.membership_residual(b));
  for (const auto& b : f.adjoint_blocks) worst = std::max(worst, alg.membership_residual(b));
  return worst;
}

StarAlgebra environment_commutant_direct(const BipartiteOperator& m, const Tolerance& tol) {
  const std::size_t n = m.sys_dim();
  const std::size_t d = m.env_dim();
  const ComplexMatrix& a = m.matrix();
  const ComplexMatrix adj = a.adjoint();
  const ComplexMatrix id_h = identity(n);
  const auto len = a.size();
  ComplexMatrix map(2 * len, static_cast<Eigen::Index>(d * d));
  for (std::size_t l = 0; l < d; ++l) {
    for (std::size_t k = 0; k < d; ++k) {
      const ComplexMatrix y = kron(id_h, matrix_unit(d, k, l));
      const auto col = static_cast<Eigen::Index>(l * d + k);
      map.col(col).head(len) = vec(y * a - a * y);
      map.col(col).tail(len) = vec(y * adj - adj * y);
    }
  }
  return star_repair(d, nullspace(map, tol), tol);
}

ComplexMatrix compress_env(const BipartiteOperator& m, const ComplexMatrix& q) {
  const ComplexMatrix iq = kron(identity(m.sys_dim()), q);
  return iq.adjoint() * m.matrix() * iq;
}

EnvironmentSplit classical_quantum_split(const BipartiteOperator& u, const Tolerance& tol,
                                         std::uint64_t seed) {
  const std::size_t n = u.sys_dim();
  const std::size_t d = u.env_dim();
  EnvironmentSplit s;
  const StarAlgebra alg = environment_algebra(u, tol);
  s.structure = structure_decomposition(alg, tol, seed);
  s.p_c = max_commutative_projection(s.structure);
  const ComplexMatrix id_k = identity(d);
  const auto dd = static_cast<Eigen::Index>(d);
  s.kc_basis = s.p_c.rank() > 0 ? range_basis(s.p_c.matrix, tol) : ComplexMatrix(dd, 0);
  s.kq_basis = s.p_c.rank() < d ? range_basis(id_k - s.p_c.matrix, tol) : ComplexMatrix(dd, 0);
  if (s.kc_basis.cols() + s.kq_basis.cols() != dd) {
    throw NumericalFault("classical/quantum split: bases of K_c and K_q do not fill K");
  }

  const ComplexMatrix id_h = identity(n);
  const ComplexMatrix pc = kron(id_h, projector(s.kc_basis));
  const ComplexMatrix pq = kron(id_h, projector(s.kq_basis));
  s.off_block_residual = std::max((pq * u.matrix() * pc).norm(), (pc * u.matrix() * pq).norm());
  if (s.off_block_residual > tol.eq_abs) {
    throw NumericalFault("classical/quantum split: H (x) K_c is not invariant (off-block norm " +
                         std::to_string(s.off_block_residual) + ")");
  }

  if (s.kc_dim() > 0) {
    s.u_c = BipartiteOperator(n, s.kc_dim(), compress_env(u, s.kc_basis), OperatorKind::unitary, tol);
    s.classical_commutativity_defect = commutativity_defect(environment_algebra(*s.u_c, tol));
    if (s.classical_commutativity_defect > tol.eq_abs) {
      throw NumericalFault("classical/quantum split: A(U_c) is not commutative (defect " +
                           std::to_string(s.classical_commutativity_defect) + ")");
    }
  }
  if (s.kq_dim() > 0) {
    s.u_q = BipartiteOperator(n, s.kq_dim(), compress_env(u, s.kq_basis), OperatorKind::unitary, tol);
    const StarAlgebra aq = environment_algebra(*s.u_q, tol);
    s.quantum_pc_rank = max_commutative_projection(aq, tol, seed).rank();
    if (s.quantum_pc_rank != 0) {
      throw NumericalFault("classical/quantum split: A(U_q) still has a commutative part of rank " +
                           std::to_string(s.quantum_pc_rank));
    }
  }
  return s;
}

ComplexMatrix ClassicalForm::reconstruct() const {
  const ComplexMatrix& left = phi ? *phi : psi;
  const auto n = unitaries.empty() ? 0 : unitaries.front().rows();
  const auto d = psi.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n * d, n * d);
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out += kron(unitaries[i], left.col(k) * psi.col(k).adjoint());
  }
  return out;
}

ClassicalForm commutative_form(const BipartiteOperator& u, const Tolerance& tol, std::uint64_t seed) {
  const StarAlgebra alg = environment_algebra(u, tol);
  const double defect = commutativity_defect(alg);
  if (defect > tol.eq_abs) {
    throw InputError("commutative_form: A(U) is not commutative (defect " + std::to_string(defect) +
                     ")");
  }
  const StructureDecomposition sd = structure_decomposition(alg, tol, seed);
  const std::size_t d = u.env_dim();
  ClassicalForm form;
  form.psi.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  Eigen::Index col = 0;
  for (const auto& blk : sd.blocks) {
    const ComplexMatrix q = range_basis(blk.z, tol);
    for (Eigen::Index k = 0; k < q.cols(); ++k) form.psi.col(col++) = q.col(k);
  }
  if (col != static_cast<Eigen::Index>(d)) {
    throw NumericalFault("commutative_form: minimal projections do not resolve K");
  }
  for (Eigen::Index i = 0; i < form.psi.cols(); ++i) {
    form.unitaries.push_back(compress_env(u, form.psi.col(i)));
    const auto& ui = form.unitaries.back();
    form.unitarity_residual =
        std::max(form.unitarity_residual, (ui.adjoint() * ui - identity(u.sys_dim())).norm());
  }
  form.reconstruction_residual = (form.reconstruct() - u.matrix()).norm();
  return form;
}

}  // namespace envalg
