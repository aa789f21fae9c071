#pragma once

// Dense complex linear algebra used by every other module: Kronecker
// products, partial traces on H (x) K, eigen/singular decompositions,
// numerical nullspaces and Hilbert-Schmidt orthonormalization.
//
// Index convention for operators on H (x) K: the system index is the outer
// (block) index, row = i_sys * d + i_env. Vectorization is column stacking,
// so vec(A X B) = (B^T (x) A) vec(X).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace envalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds. rank_rel drives rank and nullspace decisions
/// (relative to the largest singular value); eq_abs is the absolute bound
/// for matrix-equality assertions.
struct Tolerance {
  double rank_rel = 1e-10;
  double eq_abs = 1e-9;

  void validate() const;
};

enum class OperatorKind { general, unitary, hermitian };

/// An operator on H (x) K with recorded dimensions N = dim H, d = dim K.
class BipartiteOperator {
 public:
  BipartiteOperator() = default;

  /// Validates the shape, finiteness and (for unitary/hermitian kinds) the
  /// defining identity to tol.eq_abs.
  BipartiteOperator(std::size_t sys_dim, std::size_t env_dim, ComplexMatrix matrix,
                    OperatorKind kind = OperatorKind::general, const Tolerance& tol = {});

  std::size_t sys_dim() const { return sys_dim_; }
  std::size_t env_dim() const { return env_dim_; }
  std::size_t total_dim() const { return sys_dim_ * env_dim_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  OperatorKind kind() const { return kind_; }

  /// The d x d block with system indices (i, j).
  ComplexMatrix block(std::size_t i, std::size_t j) const;

  BipartiteOperator adjoint() const;

  /// ||M^dagger M - I||_F.
  double unitarity_residual() const;
  /// ||M - M^dagger||_F.
  double hermiticity_residual() const;

 private:
  std::size_t sys_dim_ = 0;
  std::size_t env_dim_ = 0;
  ComplexMatrix matrix_;
  OperatorKind kind_ = OperatorKind::general;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr_K[M], an N x N matrix.
ComplexMatrix partial_trace_env(const BipartiteOperator& m);

/// Tr_K[M (I_H (x) F)] for a d x d weight F. For F = |g><f| this is the
/// operator with <phi, result psi> = <phi (x) f, M (psi (x) g)>.
ComplexMatrix partial_trace_weighted(const BipartiteOperator& m, const ComplexMatrix& weight);

/// Tr_H[M], a d x d matrix.
ComplexMatrix partial_trace_sys(const BipartiteOperator& m);

/// Tr_H[M (G (x) I_K)] for an N x N weight G. For G = |g><f| this is the
/// environment picture U(f, g) with <phi, result psi> = <f (x) phi, M (g (x) psi)>.
ComplexMatrix partial_trace_sys_weighted(const BipartiteOperator& m, const ComplexMatrix& weight);

struct HermitianEigen {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // orthonormal columns
};

/// Throws DimensionError for non-square input and InputError when
/// ||A - A^dagger|| exceeds tol.eq_abs * max(1, ||A||).
HermitianEigen eig_hermitian(const ComplexMatrix& a, const Tolerance& tol = {});

struct Svd {
  ComplexMatrix u;
  RealVector sigma;  // non-negative, descending
  ComplexMatrix v;
};

/// Full SVD, A = U diag(sigma) V^dagger with square unitary U and V.
Svd svd(const ComplexMatrix& a);

/// Threshold below which a singular value counts as zero: rank_rel * sigma_max,
/// or everything when sigma_max <= eq_abs.
double rank_threshold(double sigma_max, const Tolerance& tol);

std::size_t numerical_rank(const ComplexMatrix& a, const Tolerance& tol);

/// Orthonormal basis (columns) of {v : A v ~ 0}.
ComplexMatrix nullspace(const ComplexMatrix& a, const Tolerance& tol);

/// Nullspace of a tall matrix supplied as a sequence of row blocks. Each
/// block is folded into an n x n triangular factor by Householder QR, so the
/// full stack is never stored.
class StackedNullspace {
 public:
  explicit StackedNullspace(std::size_t cols);

  void add_rows(const ComplexMatrix& rows);
  std::size_t cols() const { return cols_; }
  ComplexMatrix solve(const Tolerance& tol) const;
  /// Singular values of the accumulated stack (descending).
  RealVector singular_values() const;

 private:
  std::size_t cols_;
  ComplexMatrix r_;
};

ComplexVector vec(const ComplexMatrix& x);
ComplexMatrix unvec(const ComplexVector& v, std::size_t rows, std::size_t cols);

/// <A, B> = Tr[A^dagger B].
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Extends the orthonormal columns of `basis` with the part of `candidates`
/// (columns) lying outside their span. Rank decisions are relative to
/// max(1 if basis non-empty, largest candidate norm). New columns are phase
/// normalized.
ComplexMatrix extend_orthonormal(const ComplexMatrix& basis, const ComplexMatrix& candidates,
                                 const Tolerance& tol);

/// Orthonormal columns spanning the columns of `a`.
ComplexMatrix orthonormal_span(const ComplexMatrix& a, const Tolerance& tol);

/// HS-orthonormal basis of span(mats).
std::vector<ComplexMatrix> hs_orthonormalize(std::span<const ComplexMatrix> mats,
                                             const Tolerance& tol);

/// Stacks vec(m) of equally sized matrices as columns.
ComplexMatrix stack_vecs(std::span<const ComplexMatrix> mats);

/// max over columns q of `inner` of ||q - Q Q^dagger q|| with Q = `outer`.
/// Both arguments must have orthonormal columns.
double containment_residual(const ComplexMatrix& inner, const ComplexMatrix& outer);

/// Mutual containment residual; zero iff the spans coincide.
double subspace_residual(const ComplexMatrix& a, const ComplexMatrix& b);

/// Orthonormal basis of range(P) for a projection P, built by Gram-Schmidt on
/// P e_0, P e_1, ... in canonical order, each vector phase normalized.
ComplexMatrix range_basis(const ComplexMatrix& projection, const Tolerance& tol);

/// Multiplies v by a unit phase so its first coordinate with magnitude above
/// `floor` is real positive.
void normalize_phase(Eigen::Ref<ComplexVector> v, double floor = 1e-12);

/// Orthogonal projection onto the span of orthonormal columns q.
ComplexMatrix projector(const ComplexMatrix& q);

ComplexMatrix identity(std::size_t n);

/// |i><j| in dimension n.
ComplexMatrix matrix_unit(std::size_t n, std::size_t i, std::size_t j);

ComplexVector basis_vector(std::size_t n, std::size_t i);

/// ||A B - B A||_F.
double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace envalg
