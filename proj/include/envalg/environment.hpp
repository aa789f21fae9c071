#pragma once

// Environment pictures U(f, g), the environment algebra A(U), the split of K
// into a classical and a quantum part, and the commutative normal form.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "envalg/linalg.hpp"
#include "envalg/random.hpp"
#include "envalg/star_algebra.hpp"

namespace envalg {

struct BlockFamily {
  std::size_t sys_dim = 0;
  std::size_t env_dim = 0;
  std::vector<ComplexMatrix> blocks;          // B[i][j] at i * N + j
  std::vector<ComplexMatrix> adjoint_blocks;  // blocks of M^dagger

  const ComplexMatrix& block(std::size_t i, std::size_t j) const { return blocks[i * sys_dim + j]; }
  const ComplexMatrix& adjoint_block(std::size_t i, std::size_t j) const {
    return adjoint_blocks[i * sys_dim + j];
  }

  /// sum_ij |e_i><e_j| (x) B[i][j].
  ComplexMatrix reconstruct() const;
};

BlockFamily env_blocks(const BipartiteOperator& m);

/// The algebra generated by every block of M and M^dagger.
StarAlgebra environment_algebra(const BipartiteOperator& m, const Tolerance& tol = {});

/// max over blocks of M and M^dagger of the distance from `alg`; zero iff
/// M, M^dagger lie in B(H) (x) alg.
double block_membership_residual(const BipartiteOperator& m, const StarAlgebra& alg);

/// {Y : [I (x) Y, M] = [I (x) Y, M^dagger] = 0}, solved on the full operator.
StarAlgebra environment_commutant_direct(const BipartiteOperator& m, const Tolerance& tol = {});

/// (I (x) Q^dagger) M (I (x) Q) for orthonormal columns Q spanning a subspace
/// of K.
ComplexMatrix compress_env(const BipartiteOperator& m, const ComplexMatrix& q);

struct EnvironmentSplit {
  Projection p_c;
  ComplexMatrix kc_basis;  // d x dim K_c
  ComplexMatrix kq_basis;  // d x dim K_q
  std::optional<BipartiteOperator> u_c;
  std::optional<BipartiteOperator> u_q;
  StructureDecomposition structure;  // of A(U)
  double off_block_residual = 0.0;
  double classical_commutativity_defect = 0.0;  // of A(U_c)
  std::size_t quantum_pc_rank = 0;              // rank P_c(A(U_q)), zero when valid

  std::size_t kc_dim() const { return static_cast<std::size_t>(kc_basis.cols()); }
  std::size_t kq_dim() const { return static_cast<std::size_t>(kq_basis.cols()); }
};

/// Throws NumericalFault when the split invariants fail.
EnvironmentSplit classical_quantum_split(const BipartiteOperator& u, const Tolerance& tol = {},
                                         std::uint64_t seed = kDefaultSeed);

struct ClassicalForm {
  std::vector<ComplexMatrix> unitaries;  // U_i on H
  ComplexMatrix psi;                     // columns psi_i
  std::optional<ComplexMatrix> phi;      // columns phi_i (right-action form)
  double reconstruction_residual = 0.0;
  double unitarity_residual = 0.0;  // max_i ||U_i^dagger U_i - I||

  /// sum_i U_i (x) |phi_i><psi_i| (phi = psi when absent).
  ComplexMatrix reconstruct() const;
};

/// U = sum_i U_i (x) |psi_i><psi_i|. Throws InputError when A(U) is not
/// commutative.
ClassicalForm commutative_form(const BipartiteOperator& u, const Tolerance& tol = {},
                               std::uint64_t seed = kDefaultSeed);

}  // namespace envalg
