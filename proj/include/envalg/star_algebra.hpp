#pragma once

// Finite-dimensional matrix *-algebras on C^d, stored as an HS-orthonormal
// basis of their linear span.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "envalg/linalg.hpp"
#include "envalg/random.hpp"

namespace envalg {

class StarAlgebra {
 public:
  StarAlgebra() = default;

  /// `span` holds vec'd basis elements as orthonormal columns (d^2 x dim).
  StarAlgebra(std::size_t dim_space, ComplexMatrix span);

  static StarAlgebra full(std::size_t d);
  static StarAlgebra scalars(std::size_t d);

  std::size_t dim_space() const { return dim_space_; }
  std::size_t dim() const { return static_cast<std::size_t>(span_.cols()); }
  const ComplexMatrix& span() const { return span_; }
  const std::vector<ComplexMatrix>& basis() const { return basis_; }
  bool contains_identity() const { return contains_identity_; }

  /// ||X - P(X)||_F where P is the HS projection onto the span.
  double membership_residual(const ComplexMatrix& x) const;

  /// Largest ||B_i B_j - P(B_i B_j)|| and ||B_i^dagger - P(B_i^dagger)||.
  double closure_residual() const;

 private:
  std::size_t dim_space_ = 0;
  ComplexMatrix span_;
  std::vector<ComplexMatrix> basis_;
  bool contains_identity_ = false;
};

/// Smallest unital *-closed, multiplicatively closed span containing `gens`.
StarAlgebra generate_algebra(std::size_t d, std::span<const ComplexMatrix> gens,
                             const Tolerance& tol = {});

/// {Y : [Y, B] = 0 for every basis element B}.
StarAlgebra commutant(const StarAlgebra& alg, const Tolerance& tol = {});

/// Commutant of an arbitrary set of d x d matrices.
StarAlgebra commutant_of(std::size_t d, std::span<const ComplexMatrix> mats,
                         const Tolerance& tol = {});

/// Largest distance of an adjoint of a span element from the span (zero for a
/// *-closed span). `span` holds orthonormal vec'd columns.
double star_defect(std::size_t d, const ComplexMatrix& span);

/// Span of `span` and the adjoints of its elements, as a StarAlgebra.
StarAlgebra star_repair(std::size_t d, const ComplexMatrix& span, const Tolerance& tol = {});

/// Mutual containment residual of two spans on the same space.
double subspace_residual(const StarAlgebra& a, const StarAlgebra& b);

/// Containment residual of `inner` in `outer`.
double containment_residual(const StarAlgebra& inner, const StarAlgebra& outer);

struct BicommutantCheck {
  bool equal = false;
  double residual = 0.0;
  std::size_t generated_dim = 0;
  std::size_t bicommutant_dim = 0;
};

/// Compares generate_algebra(gens) with its double commutant. `threshold` is
/// the accepted mutual-projection residual.
BicommutantCheck bicommutant_check(std::size_t d, std::span<const ComplexMatrix> gens,
                                   const Tolerance& tol = {}, double threshold = 1e-8);

/// max ||[B_i, B_j]||_F over basis pairs.
double commutativity_defect(const StarAlgebra& alg);

bool is_commutative(const StarAlgebra& alg, const Tolerance& tol = {});

/// Span intersection; the intersection of two *-algebras is again one.
StarAlgebra intersect(const StarAlgebra& a, const StarAlgebra& b, const Tolerance& tol = {});

/// A intersect A'.
StarAlgebra center(const StarAlgebra& alg, const Tolerance& tol = {});

/// span{P B P : B in alg}. For P in alg' this is the algebra P alg P with unit P.
StarAlgebra compress(const StarAlgebra& alg, const ComplexMatrix& p, const Tolerance& tol = {});

/// Orthogonal projection P = P^dagger = P^2.
struct Projection {
  ComplexMatrix matrix;

  std::size_t rank() const;
  /// max(||P - P^dagger||, ||P^2 - P||).
  double residual() const;
};

/// One Wedderburn block z A z = M_n (x) I_m.
struct CentralBlock {
  ComplexMatrix z;  // minimal central projection
  std::size_t n = 0;  // factor size
  std::size_t m = 0;  // multiplicity
  /// Orthonormal basis of range(z), d x (n*m), column p*m + beta. In these
  /// coordinates every element of z A z reads g (x) I_m.
  ComplexMatrix iso_basis;

  std::size_t rank() const { return n * m; }
};

struct StructureDecomposition {
  std::size_t dim_space = 0;
  std::vector<CentralBlock> blocks;  // descending rank, then first support index
  std::size_t attempts = 0;          // generic-element draws used
};

StructureDecomposition structure_decomposition(const StarAlgebra& alg, const Tolerance& tol,
                                               Rng& rng);
StructureDecomposition structure_decomposition(const StarAlgebra& alg, const Tolerance& tol = {},
                                               std::uint64_t seed = kDefaultSeed);

/// Sum of the abelian central blocks (n = 1).
Projection max_commutative_projection(const StructureDecomposition& sd);
Projection max_commutative_projection(const StarAlgebra& alg, const Tolerance& tol, Rng& rng);
Projection max_commutative_projection(const StarAlgebra& alg, const Tolerance& tol = {},
                                      std::uint64_t seed = kDefaultSeed);

/// Largest deviation from the block-decomposition invariants: projections,
/// mutual orthogonality, completeness, iso_basis orthonormality and the
/// M_n (x) I_m form of every compressed basis element.
double structure_residual(const StarAlgebra& alg, const StructureDecomposition& sd);

}  // namespace envalg
