#include "envalg/right_action.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "envalg/errors.hpp"

namespace envalg {

namespace {

std::vector<ComplexMatrix> heisenberg_units(const BipartiteOperator& u) {
  const std::size_t n = u.sys_dim();
  std::vector<ComplexMatrix> out;
  out.reserve(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) out.push_back(heisenberg_image(u, matrix_unit(n, a, b)));
  }
  return out;
}

void require_same_shape(const BipartiteOperator& u, const BipartiteOperator& v) {
  if (u.sys_dim() != v.sys_dim() || u.env_dim() != v.env_dim()) {
    throw DimensionError("operators act on different spaces");
  }
}

}  // namespace

ComplexMatrix heisenberg_image(const BipartiteOperator& u, const ComplexMatrix& x) {
  const auto n = static_cast<Eigen::Index>(u.sys_dim());
  if (x.rows() != n || x.cols() != n) {
    throw DimensionError("system observable must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  return u.matrix().adjoint() * kron(x, identity(u.env_dim())) * u.matrix();
}

RightActionAlgebra right_action_algebra(const BipartiteOperator& u, const Tolerance& tol) {
  const BlockFamily f = env_blocks(u);
  const std::size_t n = f.sys_dim;
  const std::size_t d = f.env_dim;
  RightActionAlgebra out;
  const auto dd = static_cast<Eigen::Index>(d * d);
  ComplexMatrix span(dd, 0);
  // One batch per left factor U^dagger(e_i, e_j), deduplicated as it goes.
  for (const auto& left : f.adjoint_blocks) {
    ComplexMatrix batch(dd, static_cast<Eigen::Index>(n * n));
    for (std::size_t k = 0; k < f.blocks.size(); ++k) {
      batch.col(static_cast<Eigen::Index>(k)) = vec(left * f.blocks[k]);
    }
    out.generator_log += f.blocks.size();
    span = extend_orthonormal(span, batch, tol);
  }
  std::vector<ComplexMatrix> gens;
  gens.reserve(static_cast<std::size_t>(span.cols()));
  for (Eigen::Index k = 0; k < span.cols(); ++k) gens.push_back(unvec(span.col(k), d, d));
  out.alg = generate_algebra(d, gens, tol);

  out.containment_residual = containment_residual(out.alg, environment_algebra(u, tol));
  for (const auto& p : heisenberg_units(u)) {
    const BipartiteOperator image(n, d, p);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        out.membership_residual =
            std::max(out.membership_residual, out.alg.membership_residual(image.block(i, j)));
      }
    }
  }
  return out;
}

StarAlgebra right_action_commutant_direct(const BipartiteOperator& u, const Tolerance& tol) {
  const std::size_t n = u.sys_dim();
  const std::size_t d = u.env_dim();
  const ComplexMatrix id_h = identity(n);
  std::vector<ComplexMatrix> ys;
  ys.reserve(d * d);
  for (std::size_t l = 0; l < d; ++l) {
    for (std::size_t k = 0; k < d; ++k) ys.push_back(kron(id_h, matrix_unit(d, k, l)));
  }
  StackedNullspace acc(d * d);
  const auto len = static_cast<Eigen::Index>(n * n * d * d);
  for (const auto& p : heisenberg_units(u)) {
    ComplexMatrix rows(len, static_cast<Eigen::Index>(d * d));
    for (std::size_t c = 0; c < ys.size(); ++c) {
      rows.col(static_cast<Eigen::Index>(c)) = vec(ys[c] * p - p * ys[c]);
    }
    acc.add_rows(rows);
  }
  return star_repair(d, acc.solve(tol), tol);
}

double action_residual(const BipartiteOperator& u, const BipartiteOperator& v) {
  require_same_shape(u, v);
  const std::size_t n = u.sys_dim();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const ComplexMatrix x = matrix_unit(n, a, b);
      worst = std::max(worst, (heisenberg_image(v, x) - heisenberg_image(u, x)).norm());
    }
  }
  return worst;
}

std::optional<ActionEquivalenceWitness> same_action(const BipartiteOperator& u,
                                                    const BipartiteOperator& v,
                                                    const Tolerance& tol) {
  ActionEquivalenceWitness out;
  out.action_residual = action_residual(u, v);
  if (out.action_residual > tol.eq_abs) return std::nullopt;
  const BipartiteOperator vu(u.sys_dim(), u.env_dim(), v.matrix() * u.matrix().adjoint());
  out.w = partial_trace_sys(vu) / static_cast<double>(u.sys_dim());
  out.residual = (v.matrix() - kron(identity(u.sys_dim()), out.w) * u.matrix()).norm();
  if (out.residual > tol.eq_abs) return std::nullopt;
  out.v = v;
  return out;
}

EquivalentRepresentative build_equivalent_v(const BipartiteOperator& u, const Tolerance& tol,
                                            std::uint64_t seed) {
  const std::size_t n = u.sys_dim();
  const std::size_t d = u.env_dim();
  const auto nd = static_cast<Eigen::Index>(n * d);
  const auto dk = static_cast<Eigen::Index>(d);
  const double verify_thr = 10.0 * tol.eq_abs;

  const RightActionAlgebra ar = right_action_algebra(u, tol);
  EquivalentRepresentative rep;
  rep.structure = structure_decomposition(ar.alg, tol, seed);
  const auto pis = heisenberg_units(u);
  const ComplexMatrix id_h = identity(n);

  ComplexMatrix q(dk, dk);   // env basis v_{q, mu}, block after block
  ComplexMatrix y(nd, nd);   // V^dagger (e_i (x) v_{q, mu})
  Eigen::Index offset = 0;
  for (std::size_t alpha = 0; alpha < rep.structure.blocks.size(); ++alpha) {
    const CentralBlock& blk = rep.structure.blocks[alpha];
    const auto bn = static_cast<Eigen::Index>(blk.n);
    const auto bm = static_cast<Eigen::Index>(blk.m);
    const ComplexMatrix zk = kron(id_h, blk.z);
    auto e = [&](std::size_t i, std::size_t j) { return ComplexMatrix(pis[i * n + j] * zk); };
    auto f = [&](Eigen::Index nu, Eigen::Index mu) {
      ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
      for (Eigen::Index p = 0; p < bn; ++p) {
        out += blk.iso_basis.col(p * bm + nu) * blk.iso_basis.col(p * bm + mu).adjoint();
      }
      return out;
    };

    const ComplexMatrix e00 = e(0, 0);
    const ComplexMatrix corner = e00 * kron(id_h, f(0, 0));
    const auto eig = eig_hermitian(0.5 * (corner + corner.adjoint()), Tolerance{tol.rank_rel, 1e-6});
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
      if (eig.values(k) > 0.5) keep.push_back(k);
    }
    if (static_cast<Eigen::Index>(keep.size()) != bn) {
      throw NumericalFault("build_equivalent_v: block " + std::to_string(alpha) + " (n=" +
                           std::to_string(blk.n) + ", m=" + std::to_string(blk.m) +
                           ") has a corner projection of rank " + std::to_string(keep.size()) +
                           " instead of " + std::to_string(blk.n));
    }
    std::vector<ComplexMatrix> shift;
    for (Eigen::Index mu = 0; mu < bm; ++mu) shift.push_back(kron(id_h, f(mu, 0)));
    for (std::size_t i = 0; i < n; ++i) {
      const ComplexMatrix ei0 = e(i, 0);
      for (Eigen::Index qi = 0; qi < bn; ++qi) {
        const ComplexVector r = eig.vectors.col(keep[static_cast<std::size_t>(qi)]);
        for (Eigen::Index mu = 0; mu < bm; ++mu) {
          y.col(static_cast<Eigen::Index>(i) * dk + offset + qi * bm + mu) =
              ei0 * (shift[static_cast<std::size_t>(mu)] * r);
        }
      }
    }
    q.middleCols(offset, bn * bm) = blk.iso_basis;
    offset += bn * bm;
  }
  if (offset != dk) {
    throw NumericalFault("build_equivalent_v: central blocks do not fill K");
  }

  rep.orthonormality_residual = (y.adjoint() * y - ComplexMatrix::Identity(nd, nd)).norm();
  if (rep.orthonormality_residual > std::sqrt(tol.eq_abs)) {
    throw NumericalFault("build_equivalent_v: assembled isometries are not orthonormal (residual " +
                         std::to_string(rep.orthonormality_residual) + ")");
  }
  const Svd polar = svd(y);
  y = polar.u * polar.v.adjoint();
  const ComplexMatrix vmat = kron(id_h, q) * y.adjoint();
  rep.unitarity_residual =
      (vmat.adjoint() * vmat - ComplexMatrix::Identity(nd, nd)).norm();
  const BipartiteOperator v(n, d, vmat, OperatorKind::unitary, tol);

  auto witness = same_action(u, v, tol);
  if (!witness) {
    throw NumericalFault("build_equivalent_v: constructed V does not reproduce the action of U "
                         "(action residual " + std::to_string(action_residual(u, v)) + ")");
  }
  rep.witness = std::move(*witness);

  const BlockFamily fv = env_blocks(v);
  bool blocks_ok = true;
  for (std::size_t alpha = 0; alpha < rep.structure.blocks.size(); ++alpha) {
    const CentralBlock& blk = rep.structure.blocks[alpha];
    BlockVerification bv;
    bv.index = alpha;
    bv.n = blk.n;
    bv.m = blk.m;
    for (const auto& b : fv.blocks) {
      bv.membership_residual =
          std::max(bv.membership_residual, ar.alg.membership_residual(blk.z * b * blk.z));
      bv.membership_residual = std::max(bv.membership_residual, (blk.z * b - b * blk.z).norm());
    }
    bv.verified = bv.membership_residual <= verify_thr;
    bv.detail = bv.verified ? "blocks of V lie in z A_r(U) z"
                            : "blocks of V leave z A_r(U) z (residual " +
                                  std::to_string(bv.membership_residual) + ")";
    blocks_ok = blocks_ok && bv.verified;
    rep.blocks.push_back(std::move(bv));
  }
  rep.algebra_residual = subspace_residual(environment_algebra(v, tol), ar.alg);
  rep.verified = blocks_ok && rep.unitarity_residual <= tol.eq_abs && rep.algebra_residual <= verify_thr;
  return rep;
}

ClassicalForm right_commutative_form(const BipartiteOperator& u, const Tolerance& tol,
                                     std::uint64_t seed) {
  const RightActionAlgebra ar = right_action_algebra(u, tol);
  const double defect = commutativity_defect(ar.alg);
  if (defect > tol.eq_abs) {
    throw InputError("right_commutative_form: A_r(U) is not commutative (defect " +
                     std::to_string(defect) + ")");
  }
  const EquivalentRepresentative rep = build_equivalent_v(u, tol, seed);
  if (!rep.verified) {
    throw CheckFailure("right_commutative_form: equivalent representative failed verification");
  }
  ClassicalForm form = commutative_form(rep.witness.v, tol, seed);
  form.phi = rep.witness.w.adjoint() * form.psi;
  form.reconstruction_residual = (form.reconstruct() - u.matrix()).norm();
  return form;
}

bool cyclic_vector(const StarAlgebra& alg, const ComplexVector& psi, const Tolerance& tol) {
  const auto d = static_cast<Eigen::Index>(alg.dim_space());
  if (psi.size() != d) throw DimensionError("cyclic_vector: vector has wrong length");
  ComplexMatrix images(d, static_cast<Eigen::Index>(alg.dim()));
  for (std::size_t k = 0; k < alg.dim(); ++k) {
    images.col(static_cast<Eigen::Index>(k)) = alg.basis()[k] * psi;
  }
  return numerical_rank(images, tol) == alg.dim_space();
}

StinespringWitness stinespring_minimal(const BipartiteOperator& u, const ComplexVector& psi,
                                       const Tolerance& tol) {
  return stinespring_minimal(u, right_action_algebra(u, tol), psi, tol);
}

StinespringWitness stinespring_minimal(const BipartiteOperator& u, const RightActionAlgebra& ar,
                                       const ComplexVector& psi, const Tolerance& tol) {
  const std::size_t n = u.sys_dim();
  const std::size_t d = u.env_dim();
  if (static_cast<std::size_t>(psi.size()) != d) {
    throw DimensionError("stinespring_minimal: psi must have length " + std::to_string(d));
  }
  if (std::abs(psi.norm() - 1.0) > tol.eq_abs) {
    throw InputError("stinespring_minimal: psi is not a unit vector (norm " +
                     std::to_string(psi.norm()) + ")");
  }
  StinespringWitness w;
  w.psi = psi;
  ComplexMatrix images(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      images.col(static_cast<Eigen::Index>(i * n + j)) = u.block(i, j) * psi;
    }
  }
  w.block_rank = numerical_rank(images, tol);
  w.minimal = w.block_rank == d;
  ComplexMatrix alg_images(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(ar.alg.dim()));
  for (std::size_t k = 0; k < ar.alg.dim(); ++k) {
    alg_images.col(static_cast<Eigen::Index>(k)) = ar.alg.basis()[k] * psi;
  }
  w.algebra_rank = numerical_rank(alg_images, tol);
  w.cyclic = w.algebra_rank == d;
  if (w.minimal && !w.cyclic) {
    throw CheckFailure("stinespring_minimal: psi is minimal but not cyclic for A_r(U)");
  }
  return w;
}

}  // namespace envalg
