#pragma once

// The right-action algebra A_r(U), generated by the environment blocks of
// pi(X) = U^dagger (X (x) I) U, and the objects built from it: the
// equivalence class of unitaries with the same action on B(H), the
// representative V with A(V) = A_r(U), and Stinespring minimality.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "envalg/environment.hpp"
#include "envalg/linalg.hpp"
#include "envalg/random.hpp"
#include "envalg/star_algebra.hpp"

namespace envalg {

struct RightActionAlgebra {
  StarAlgebra alg;
  std::size_t generator_log = 0;        // products U^dagger(f1,g1) U(f2,g2) used
  double containment_residual = 0.0;    // of alg in A(U)
  double membership_residual = 0.0;     // blocks of pi(|e_i><e_j|) against alg
};

RightActionAlgebra right_action_algebra(const BipartiteOperator& u, const Tolerance& tol = {});

/// U^dagger (X (x) I_K) U.
ComplexMatrix heisenberg_image(const BipartiteOperator& u, const ComplexMatrix& x);

/// {Y : [I (x) Y, pi(|e_i><e_j|)] = 0 for all i, j}, solved on the full space.
StarAlgebra right_action_commutant_direct(const BipartiteOperator& u, const Tolerance& tol = {});

/// max over system matrix units X of ||V^dagger (X (x) I) V - U^dagger (X (x) I) U||_F.
double action_residual(const BipartiteOperator& u, const BipartiteOperator& v);

struct ActionEquivalenceWitness {
  ComplexMatrix w;  // V = (I (x) W) U
  BipartiteOperator v;
  double residual = 0.0;         // ||V - (I (x) W) U||
  double action_residual = 0.0;  // see action_residual
};

/// W with V = (I (x) W) U when U and V act identically on B(H), else empty.
std::optional<ActionEquivalenceWitness> same_action(const BipartiteOperator& u,
                                                    const BipartiteOperator& v,
                                                    const Tolerance& tol = {});

/// Outcome of the construction for one central block of A_r(U).
struct BlockVerification {
  std::size_t index = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  double membership_residual = 0.0;  // blocks of V compressed by z against A_r(U)
  bool verified = false;
  std::string detail;
};

struct EquivalentRepresentative {
  ActionEquivalenceWitness witness;
  StructureDecomposition structure;  // of A_r(U)
  std::vector<BlockVerification> blocks;
  double orthonormality_residual = 0.0;  // before polishing to the nearest unitary
  double unitarity_residual = 0.0;
  double algebra_residual = 0.0;  // A(V) against A_r(U)
  bool verified = false;
};

/// A unitary V in B(H) (x) A_r(U) with the same action as U. Failures are
/// reported through `verified` and the per-block records; a missing
/// equivalence (same_action empty) throws NumericalFault.
EquivalentRepresentative build_equivalent_v(const BipartiteOperator& u, const Tolerance& tol = {},
                                            std::uint64_t seed = kDefaultSeed);

/// U = sum_i U_i (x) |phi_i><psi_i|. Throws InputError when A_r(U) is not
/// commutative and CheckFailure when the representative fails verification.
ClassicalForm right_commutative_form(const BipartiteOperator& u, const Tolerance& tol = {},
                                     std::uint64_t seed = kDefaultSeed);

struct StinespringWitness {
  ComplexVector psi;
  bool minimal = false;
  bool cyclic = false;
  std::size_t block_rank = 0;    // rank of {U(e_i, e_j) psi}
  std::size_t algebra_rank = 0;  // rank of {B_k psi : B_k basis of A_r(U)}
};

/// rank of {B_k psi} over the basis of `alg` equals dim K.
bool cyclic_vector(const StarAlgebra& alg, const ComplexVector& psi, const Tolerance& tol = {});

/// Throws InputError for a non-unit psi and CheckFailure if psi is minimal but
/// not cyclic for A_r(U).
StinespringWitness stinespring_minimal(const BipartiteOperator& u, const ComplexVector& psi,
                                       const Tolerance& tol = {});
StinespringWitness stinespring_minimal(const BipartiteOperator& u, const RightActionAlgebra& ar,
                                       const ComplexVector& psi, const Tolerance& tol = {});

}  // namespace envalg
