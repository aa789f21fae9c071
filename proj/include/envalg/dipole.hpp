#pragma once

// Dipole Hamiltonians H = H_S (x) I + sum_i V_i (x) |e_i><e_0| + V_i^dagger (x) |e_0><e_i|
// on H (x) C^{d+1}, the reduction of the coupling family and the two-case
// classification of A(H).

#include <cstddef>
#include <vector>

#include "envalg/linalg.hpp"
#include "envalg/star_algebra.hpp"

namespace envalg {

struct DipoleModel {
  ComplexMatrix h_s;                   // N x N, Hermitian
  std::vector<ComplexMatrix> couplings;  // V_1..V_d, each N x N
  ComplexMatrix h_e;                   // (d+1) x (d+1); empty means zero

  std::size_t sys_dim() const { return static_cast<std::size_t>(h_s.rows()); }
  std::size_t coupling_count() const { return couplings.size(); }
  std::size_t env_dim() const { return couplings.size() + 1; }

  /// Throws on shape errors or a non-Hermitian H_S.
  void validate(const Tolerance& tol = {}) const;

  /// The assembled Hamiltonian, system index outer.
  BipartiteOperator hamiltonian(const Tolerance& tol = {}) const;
};

struct DipoleReduction {
  ComplexMatrix w;                        // d x d unitary on the span of e_1..e_d
  std::size_t m = 0;                      // dim span{V_i}
  std::vector<ComplexMatrix> transformed;  // V'_k = sum_l conj(W_lk) V_l
  double tail_norm = 0.0;                 // max_{k > m} ||V'_k||_F
};

/// Rank-revealing change of basis of K' = e_0^perp that leaves only the
/// first m couplings nonzero, with the original V_i = sum_k W_ik V'_k.
DipoleReduction dipole_reduce(std::span<const ComplexMatrix> couplings, const Tolerance& tol = {});

enum class DipoleCase { commutative_rank_one, block_split };

struct ClassificationResult {
  DipoleCase case_tag = DipoleCase::block_split;
  DipoleReduction reduction;
  StarAlgebra algebra;  // A(H)

  // Commutative case: V'_1^dagger = e^{i theta} V'_1 and V_i = a_i V'_1.
  double theta = 0.0;
  ComplexVector a;
  double ratio_residual = 0.0;          // ||V'^dagger - e^{i theta} V'|| / ||V'||
  double reconstruction_residual = 0.0;  // ||H - normal form||

  // Block case: K = K_1 (+) K_2, as orthonormal columns in C^{d+1}.
  ComplexMatrix k1_basis;
  ComplexMatrix k2_basis;

  /// Subspace residual between A(H) and the algebra predicted by the case:
  /// alg{I, M} for the single environment matrix M, or B(K_1) (+) C I_{K_2}.
  double algebra_residual = 0.0;
  double commutativity_defect = 0.0;
};

/// The environment matrix M of the commutative case, so that
/// H = H_S (x) I + e^{i theta/2} V'_1 (x) M.
ComplexMatrix dipole_environment_matrix(double theta, const ComplexVector& a);

/// Throws InputError when H_E is nonzero.
ClassificationResult dipole_classify(const DipoleModel& model, const Tolerance& tol = {});

}  // namespace envalg
