#include "envalg/star_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "envalg/errors.hpp"

namespace envalg {

namespace {

constexpr std::size_t kMaxGenericDraws = 16;

ComplexMatrix unvec_square(const ComplexVector& v, std::size_t d) {
  return unvec(v, d, d);
}

// Adds adjoints of the span elements and re-orthonormalizes.
ComplexMatrix star_close(std::size_t d, const ComplexMatrix& span, const Tolerance& tol) {
  if (span.cols() == 0) return span;
  ComplexMatrix adj(span.rows(), span.cols());
  for (Eigen::Index k = 0; k < span.cols(); ++k) {
    adj.col(k) = vec(unvec_square(span.col(k), d).adjoint());
  }
  return extend_orthonormal(span, adj, tol);
}

// Hermitian element sum_k a_k Re(B_k) + b_k Im(B_k) with normal coefficients.
ComplexMatrix generic_hermitian(const std::vector<ComplexMatrix>& basis, Rng& rng) {
  const auto d = basis.front().rows();
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  const auto coeffs = random_normals(2 * basis.size(), rng);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const ComplexMatrix re = 0.5 * (basis[k] + basis[k].adjoint());
    const ComplexMatrix im = Complex(0.0, -0.5) * (basis[k] - basis[k].adjoint());
    h += coeffs[2 * k] * re + coeffs[2 * k + 1] * im;
  }
  return 0.5 * (h + h.adjoint());
}

struct Clusters {
  std::vector<std::vector<Eigen::Index>> members;
  double min_gap = 0.0;
  double spread = 0.0;
};

// Groups ascending eigenvalues: a new cluster starts when the gap to the
// previous eigenvalue exceeds 1e3 * rank_rel * spread.
Clusters cluster_spectrum(const RealVector& values, const Tolerance& tol) {
  Clusters c;
  if (values.size() == 0) return c;
  c.spread = values(values.size() - 1) - values(0);
  const double thr = 1e3 * tol.rank_rel * std::max(c.spread, tol.eq_abs);
  c.min_gap = std::numeric_limits<double>::infinity();
  c.members.push_back({0});
  for (Eigen::Index k = 1; k < values.size(); ++k) {
    const double gap = values(k) - values(k - 1);
    if (gap > thr) {
      c.min_gap = std::min(c.min_gap, gap);
      c.members.push_back({k});
    } else {
      c.members.back().push_back(k);
    }
  }
  return c;
}

bool clusters_unambiguous(const Clusters& c) {
  if (c.members.size() <= 1) return true;
  return c.min_gap >= 1e-6 * c.spread;
}

std::size_t first_support_index(const ComplexMatrix& z) {
  for (Eigen::Index j = 0; j < z.rows(); ++j) {
    if (z(j, j).real() > 1e-6) return static_cast<std::size_t>(j);
  }
  return static_cast<std::size_t>(z.rows());
}

std::size_t integral_or_throw(double x, const char* what) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-6 || r < 0.5) {
    throw NumericalFault(std::string("structure decomposition: non-integral ") + what + " (" +
                         std::to_string(x) + ")");
  }
  return static_cast<std::size_t>(r);
}

CentralBlock build_block(const StarAlgebra& alg, const ComplexMatrix& z, const Tolerance& tol,
                         Rng& rng, std::size_t& attempts) {
  const std::size_t d = alg.dim_space();
  CentralBlock blk;
  blk.z = z;
  std::vector<ComplexMatrix> compressed;
  compressed.reserve(alg.dim());
  for (const auto& b : alg.basis()) compressed.push_back(z * b * z);
  const auto cbasis = hs_orthonormalize(compressed, tol);
  const std::size_t dim_block = cbasis.size();
  blk.n = integral_or_throw(std::sqrt(static_cast<double>(dim_block)), "factor size");
  if (blk.n * blk.n != dim_block) {
    throw NumericalFault("structure decomposition: block dimension " + std::to_string(dim_block) +
                         " is not a square");
  }
  const std::size_t rank = integral_or_throw(z.trace().real(), "projection rank");
  if (rank % blk.n != 0) {
    throw NumericalFault("structure decomposition: rank " + std::to_string(rank) +
                         " not divisible by factor size " + std::to_string(blk.n));
  }
  blk.m = rank / blk.n;
  const ComplexMatrix qz = range_basis(z, tol);
  if (static_cast<std::size_t>(qz.cols()) != rank) {
    throw NumericalFault("structure decomposition: central projection range is degenerate");
  }
  if (blk.n == 1) {
    blk.iso_basis = qz;
    return blk;
  }

  const auto n = static_cast<Eigen::Index>(blk.n);
  const auto m = static_cast<Eigen::Index>(blk.m);
  for (std::size_t attempt = 0; attempt < kMaxGenericDraws; ++attempt) {
    ++attempts;
    const ComplexMatrix h = generic_hermitian(cbasis, rng);
    const ComplexMatrix hr = qz.adjoint() * h * qz;
    const auto eig = eig_hermitian(hr, tol);
    const Clusters cl = cluster_spectrum(eig.values, tol);
    if (cl.members.size() != blk.n || !clusters_unambiguous(cl)) continue;
    bool sizes_ok = true;
    for (const auto& c : cl.members) sizes_ok = sizes_ok && static_cast<Eigen::Index>(c.size()) == m;
    if (!sizes_ok) continue;

    std::vector<ComplexMatrix> e(blk.n);
    for (std::size_t p = 0; p < blk.n; ++p) {
      ComplexMatrix vp(qz.cols(), m);
      for (Eigen::Index k = 0; k < m; ++k) vp.col(k) = eig.vectors.col(cl.members[p][k]);
      const ComplexMatrix w = qz * vp;
      e[p] = w * w.adjoint();
    }
    const ComplexMatrix u = range_basis(e[0], tol);
    if (u.cols() != m) continue;
    ComplexMatrix iso(static_cast<Eigen::Index>(d), n * m);
    iso.leftCols(m) = u;
    bool ok = true;
    for (std::size_t p = 1; p < blk.n && ok; ++p) {
      // e_p A e_1 is one-dimensional: pick the best-conditioned representative.
      ComplexMatrix best;
      double best_norm = 0.0;
      for (const auto& c : cbasis) {
        ComplexMatrix x = e[p] * c * e[0];
        const double nx = x.norm();
        if (nx > best_norm) {
          best_norm = nx;
          best = std::move(x);
        }
      }
      if (best_norm <= std::sqrt(tol.eq_abs)) {
        ok = false;
        break;
      }
      const ComplexMatrix unit = best * (std::sqrt(static_cast<double>(blk.m)) / best_norm);
      iso.middleCols(static_cast<Eigen::Index>(p) * m, m) = unit * u;
    }
    if (!ok) continue;
    const double ortho = (iso.adjoint() * iso - ComplexMatrix::Identity(n * m, n * m)).norm();
    if (ortho > std::sqrt(tol.eq_abs)) continue;
    blk.iso_basis = iso;
    return blk;
  }
  throw NumericalFault("structure decomposition: could not resolve matrix units of a block with n=" +
                       std::to_string(blk.n) + ", m=" + std::to_string(blk.m));
}

}  // namespace

StarAlgebra::StarAlgebra(std::size_t dim_space, ComplexMatrix span)
    : dim_space_(dim_space), span_(std::move(span)) {
  const auto len = static_cast<Eigen::Index>(dim_space_ * dim_space_);
  if (span_.cols() == 0) span_.resize(len, 0);
  if (span_.rows() != len) {
    throw DimensionError("star algebra span has wrong row count");
  }
  basis_.reserve(static_cast<std::size_t>(span_.cols()));
  for (Eigen::Index k = 0; k < span_.cols(); ++k) {
    basis_.push_back(unvec_square(span_.col(k), dim_space_));
  }
  contains_identity_ = dim_space_ > 0 && membership_residual(identity(dim_space_)) <= 1e-8;
}

StarAlgebra StarAlgebra::full(std::size_t d) {
  const auto len = static_cast<Eigen::Index>(d * d);
  return StarAlgebra(d, ComplexMatrix::Identity(len, len));
}

StarAlgebra StarAlgebra::scalars(std::size_t d) {
  ComplexMatrix q(static_cast<Eigen::Index>(d * d), 1);
  q.col(0) = vec(identity(d)) / std::sqrt(static_cast<double>(d));
  return StarAlgebra(d, q);
}

double StarAlgebra::membership_residual(const ComplexMatrix& x) const {
  ComplexVector v = vec(x);
  if (span_.cols() > 0) v -= span_ * (span_.adjoint() * v);
  return v.norm();
}

double StarAlgebra::closure_residual() const {
  double worst = 0.0;
  for (const auto& a : basis_) {
    worst = std::max(worst, membership_residual(a.adjoint()));
    for (const auto& b : basis_) worst = std::max(worst, membership_residual(a * b));
  }
  return worst;
}

StarAlgebra generate_algebra(std::size_t d, std::span<const ComplexMatrix> gens,
                             const Tolerance& tol) {
  const auto dd = static_cast<Eigen::Index>(d * d);
  std::vector<ComplexMatrix> seed;
  seed.reserve(2 * gens.size() + 1);
  seed.push_back(identity(d));
  for (const auto& g : gens) {
    if (static_cast<std::size_t>(g.rows()) != d || static_cast<std::size_t>(g.cols()) != d) {
      throw DimensionError("generate_algebra: generator is not " + std::to_string(d) + "x" +
                           std::to_string(d));
    }
    seed.push_back(g);
    seed.push_back(g.adjoint());
  }
  // The identity goes first so that it is always kept.
  ComplexMatrix q = extend_orthonormal(ComplexMatrix(dd, 0), stack_vecs(std::span(seed).first(1)), tol);
  q = extend_orthonormal(q, stack_vecs(std::span(seed).subspan(1)), tol);

  while (q.cols() < dd) {
    const auto r = q.cols();
    std::vector<ComplexMatrix> mats;
    mats.reserve(static_cast<std::size_t>(r));
    for (Eigen::Index k = 0; k < r; ++k) mats.push_back(unvec_square(q.col(k), d));
    ComplexMatrix products(dd, r * r);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < r; ++j) {
        products.col(i * r + j) = vec(mats[static_cast<std::size_t>(i)] * mats[static_cast<std::size_t>(j)]);
      }
    }
    q = extend_orthonormal(q, products, tol);
    if (q.cols() == r) break;
  }
  return StarAlgebra(d, std::move(q));
}

StarAlgebra commutant_of(std::size_t d, std::span<const ComplexMatrix> mats, const Tolerance& tol) {
  const ComplexMatrix id = identity(d);
  StackedNullspace acc(d * d);
  for (const auto& b : mats) {
    acc.add_rows(kron(b.transpose(), id) - kron(id, b));
  }
  ComplexMatrix q = acc.solve(tol);
  if (q.cols() == 0) {
    throw NumericalFault("commutant: empty nullspace (the identity always commutes)");
  }
  return StarAlgebra(d, star_close(d, q, tol));
}

double star_defect(std::size_t d, const ComplexMatrix& span) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < span.cols(); ++k) {
    ComplexVector v = vec(unvec_square(span.col(k), d).adjoint());
    v -= span * (span.adjoint() * v);
    worst = std::max(worst, v.norm());
  }
  return worst;
}

StarAlgebra star_repair(std::size_t d, const ComplexMatrix& span, const Tolerance& tol) {
  return StarAlgebra(d, star_close(d, span, tol));
}

StarAlgebra commutant(const StarAlgebra& alg, const Tolerance& tol) {
  return commutant_of(alg.dim_space(), alg.basis(), tol);
}

double containment_residual(const StarAlgebra& inner, const StarAlgebra& outer) {
  if (inner.dim_space() != outer.dim_space()) {
    throw DimensionError("containment_residual: algebras act on different spaces");
  }
  return containment_residual(inner.span(), outer.span());
}

double subspace_residual(const StarAlgebra& a, const StarAlgebra& b) {
  if (a.dim_space() != b.dim_space()) {
    throw DimensionError("subspace_residual: algebras act on different spaces");
  }
  return subspace_residual(a.span(), b.span());
}

BicommutantCheck bicommutant_check(std::size_t d, std::span<const ComplexMatrix> gens,
                                   const Tolerance& tol, double threshold) {
  const StarAlgebra a = generate_algebra(d, gens, tol);
  const StarAlgebra a2 = commutant(commutant(a, tol), tol);
  BicommutantCheck out;
  out.generated_dim = a.dim();
  out.bicommutant_dim = a2.dim();
  out.residual = subspace_residual(a, a2);
  out.equal = out.generated_dim == out.bicommutant_dim && out.residual <= threshold;
  return out;
}

double commutativity_defect(const StarAlgebra& alg) {
  double worst = 0.0;
  const auto& b = alg.basis();
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      worst = std::max(worst, commutator_norm(b[i], b[j]));
    }
  }
  return worst;
}

bool is_commutative(const StarAlgebra& alg, const Tolerance& tol) {
  return commutativity_defect(alg) <= tol.eq_abs;
}

StarAlgebra intersect(const StarAlgebra& a, const StarAlgebra& b, const Tolerance& tol) {
  if (a.dim_space() != b.dim_space()) {
    throw DimensionError("intersect: algebras act on different spaces");
  }
  const std::size_t d = a.dim_space();
  const auto ra = a.span().cols();
  const auto rb = b.span().cols();
  if (ra == 0 || rb == 0) return StarAlgebra(d, ComplexMatrix(static_cast<Eigen::Index>(d * d), 0));
  ComplexMatrix joint(a.span().rows(), ra + rb);
  joint << a.span(), -b.span();
  const ComplexMatrix coeff = nullspace(joint, tol);
  ComplexMatrix common = a.span() * coeff.topRows(ra);
  return StarAlgebra(d, orthonormal_span(common, tol));
}

StarAlgebra center(const StarAlgebra& alg, const Tolerance& tol) {
  return intersect(alg, commutant(alg, tol), tol);
}

StarAlgebra compress(const StarAlgebra& alg, const ComplexMatrix& p, const Tolerance& tol) {
  std::vector<ComplexMatrix> mats;
  mats.reserve(alg.dim());
  for (const auto& b : alg.basis()) mats.push_back(p * b * p);
  const auto len = static_cast<Eigen::Index>(alg.dim_space() * alg.dim_space());
  if (mats.empty()) return StarAlgebra(alg.dim_space(), ComplexMatrix(len, 0));
  return StarAlgebra(alg.dim_space(), orthonormal_span(stack_vecs(mats), tol));
}

std::size_t Projection::rank() const {
  return static_cast<std::size_t>(std::max(0LL, std::llround(matrix.trace().real())));
}

double Projection::residual() const {
  return std::max((matrix - matrix.adjoint()).norm(), (matrix * matrix - matrix).norm());
}

StructureDecomposition structure_decomposition(const StarAlgebra& alg, const Tolerance& tol,
                                               Rng& rng) {
  if (!alg.contains_identity()) {
    throw InputError("structure decomposition needs a unital algebra");
  }
  const std::size_t d = alg.dim_space();
  StructureDecomposition sd;
  sd.dim_space = d;
  const StarAlgebra z = center(alg, tol);

  std::vector<ComplexMatrix> projections;
  if (z.dim() <= 1) {
    projections.push_back(identity(d));
  } else {
    bool resolved = false;
    for (std::size_t attempt = 0; attempt < kMaxGenericDraws && !resolved; ++attempt) {
      ++sd.attempts;
      const ComplexMatrix h = generic_hermitian(z.basis(), rng);
      const auto eig = eig_hermitian(h, tol);
      const Clusters cl = cluster_spectrum(eig.values, tol);
      if (cl.members.size() != z.dim() || !clusters_unambiguous(cl)) continue;
      projections.clear();
      for (const auto& members : cl.members) {
        ComplexMatrix w(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(members.size()));
        for (std::size_t k = 0; k < members.size(); ++k) {
          w.col(static_cast<Eigen::Index>(k)) = eig.vectors.col(members[k]);
        }
        projections.push_back(w * w.adjoint());
      }
      resolved = true;
    }
    if (!resolved) {
      throw NumericalFault("structure decomposition: central spectrum did not split into " +
                           std::to_string(z.dim()) + " clusters after " +
                           std::to_string(kMaxGenericDraws) + " draws");
    }
  }

  for (const auto& p : projections) {
    sd.blocks.push_back(build_block(alg, p, tol, rng, sd.attempts));
  }
  std::stable_sort(sd.blocks.begin(), sd.blocks.end(), [](const CentralBlock& a, const CentralBlock& b) {
    if (a.rank() != b.rank()) return a.rank() > b.rank();
    return first_support_index(a.z) < first_support_index(b.z);
  });
  return sd;
}

StructureDecomposition structure_decomposition(const StarAlgebra& alg, const Tolerance& tol,
                                               std::uint64_t seed) {
  Rng rng(seed);
  return structure_decomposition(alg, tol, rng);
}

Projection max_commutative_projection(const StructureDecomposition& sd) {
  const auto d = static_cast<Eigen::Index>(sd.dim_space);
  Projection p{ComplexMatrix::Zero(d, d)};
  for (const auto& b : sd.blocks) {
    if (b.n == 1) p.matrix += b.z;
  }
  return p;
}

Projection max_commutative_projection(const StarAlgebra& alg, const Tolerance& tol, Rng& rng) {
  return max_commutative_projection(structure_decomposition(alg, tol, rng));
}

Projection max_commutative_projection(const StarAlgebra& alg, const Tolerance& tol,
                                      std::uint64_t seed) {
  Rng rng(seed);
  return max_commutative_projection(alg, tol, rng);
}

double structure_residual(const StarAlgebra& alg, const StructureDecomposition& sd) {
  const auto d = static_cast<Eigen::Index>(sd.dim_space);
  double worst = 0.0;
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  std::size_t dim_sum = 0;
  for (std::size_t a = 0; a < sd.blocks.size(); ++a) {
    const auto& blk = sd.blocks[a];
    worst = std::max(worst, Projection{blk.z}.residual());
    total += blk.z;
    dim_sum += blk.n * blk.n;
    for (std::size_t b = a + 1; b < sd.blocks.size(); ++b) {
      worst = std::max(worst, (blk.z * sd.blocks[b].z).norm());
    }
    const auto k = blk.iso_basis.cols();
    worst = std::max(worst, (blk.iso_basis.adjoint() * blk.iso_basis - ComplexMatrix::Identity(k, k)).norm());
    worst = std::max(worst, (blk.iso_basis * blk.iso_basis.adjoint() - blk.z).norm());
    const auto n = static_cast<Eigen::Index>(blk.n);
    const auto m = static_cast<Eigen::Index>(blk.m);
    for (const auto& b : alg.basis()) {
      const ComplexMatrix g = blk.iso_basis.adjoint() * b * blk.iso_basis;
      ComplexMatrix reduced = ComplexMatrix::Zero(n, n);
      for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = 0; q < n; ++q) {
          reduced(p, q) = g.block(p * m, q * m, m, m).trace() / static_cast<double>(m);
        }
      }
      worst = std::max(worst, (g - kron(reduced, ComplexMatrix::Identity(m, m))).norm());
    }
  }
  worst = std::max(worst, (total - ComplexMatrix::Identity(d, d)).norm());
  if (dim_sum != alg.dim()) worst = std::max(worst, 1.0);
  return worst;
}

}  // namespace envalg
