#pragma once

// Superoperators induced by a bipartite unitary, their eigenvalue-1 and
// singular-value-1 spaces, the Heisenberg-picture channel L_omega on B(H),
// and entropy bookkeeping.

#include <cstddef>
#include <span>

#include "envalg/linalg.hpp"
#include "envalg/star_algebra.hpp"

namespace envalg {

enum class SuperoperatorKind { L, Lstar, heisenberg_omega };

/// Acts on column-stacked X: vec(S(X)) = matrix * vec(X).
struct Superoperator {
  std::size_t dim = 0;
  ComplexMatrix matrix;  // dim^2 x dim^2
  SuperoperatorKind kind = SuperoperatorKind::L;

  ComplexMatrix apply(const ComplexMatrix& x) const;
};

/// X -> Tr_H[U (I/N (x) X) U^dagger] on B(K).
Superoperator build_L(const BipartiteOperator& u);
/// X -> Tr_H[U^dagger (I/N (x) X) U] on B(K).
Superoperator build_Lstar(const BipartiteOperator& u);

struct SpectralSpace {
  StarAlgebra space;
  double star_defect = 0.0;         // before *-repair
  double top_singular_value = 0.0;  // of L
};

/// ker(L - Id) intersected with ker(L* - Id). Throws NumericalFault if the
/// raw nullspace is not *-closed to eq_abs.
SpectralSpace fixed_space(const BipartiteOperator& u, const Tolerance& tol = {});

/// ker(L^dagger L - Id). Throws NumericalFault if L has a singular value
/// above 1 + eq_abs or the space is not *-closed.
SpectralSpace singular_one_space(const BipartiteOperator& u, const Tolerance& tol = {});

class DensityMatrix {
 public:
  /// Validates Hermiticity, trace one and eigenvalues >= -eq_abs.
  explicit DensityMatrix(ComplexMatrix matrix, const Tolerance& tol = {});

  static DensityMatrix pure(const ComplexVector& psi, const Tolerance& tol = {});
  static DensityMatrix maximally_mixed(std::size_t d);

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  ComplexMatrix matrix_;
};

/// X -> Tr_K[U^dagger (X (x) I) U (I (x) omega)] on B(H).
Superoperator heisenberg_channel(const BipartiteOperator& u, const DensityMatrix& omega);

/// -Tr[omega log omega], natural logarithm.
double entropy(const DensityMatrix& omega, const Tolerance& tol = {});
/// -sum p_i log p_i.
double shannon(std::span<const double> p, const Tolerance& tol = {});

struct EntropyCheck {
  double s_before = 0.0;
  double s_after = 0.0;
  double equality_residual = 0.0;  // ||U (I/N (x) omega) U^dagger - I/N (x) L(omega)||
  bool increased = false;          // s_after >= s_before - slack
  bool equal = false;              // |s_after - s_before| <= slack
  bool equality_condition_holds = false;  // equality_residual <= sqrt(slack)
};

/// The entropy comparison without the monotonicity assertion.
EntropyCheck entropy_evaluate(const BipartiteOperator& u, const DensityMatrix& omega,
                              double slack = 1e-10, const Tolerance& tol = {});
/// Throws CheckFailure if the entropy decreases by more than `slack`.
EntropyCheck entropy_check(const BipartiteOperator& u, const DensityMatrix& omega,
                           double slack = 1e-10, const Tolerance& tol = {});

}  // namespace envalg
