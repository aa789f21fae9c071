#pragma once

// Reference unitaries and coupling families: the worked examples and the
// random constructions used by tests, selfcheck and the acceptance suite.

#include <cstddef>
#include <string>
#include <vector>

#include "envalg/dipole.hpp"
#include "envalg/linalg.hpp"
#include "envalg/random.hpp"

namespace envalg {

/// Reorders a matrix written with the environment index outer
/// (row = i_env * N + i_sys) into the library convention.
ComplexMatrix env_outer_to_sys_outer(const ComplexMatrix& m, std::size_t sys_dim, std::size_t env_dim);

/// [[cos a, -sin a], [sin a, cos a]].
ComplexMatrix rotation(double angle);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Two-level emission unitary on C^2 (x) C^2.
BipartiteOperator spontaneous_emission(double theta);

/// rot(alpha) (x) |e1><e1| + rot(beta) (x) |e2><e2| plus an emission-type
/// block on span{e3, e4}; N = 2, d = 4.
BipartiteOperator block_example(double alpha, double beta, double theta);

struct UnitaryPair {
  BipartiteOperator u;  // U2 (x) |e0><e1| + U1 (x) |e1><e0|
  BipartiteOperator v;  // U1 (x) |e0><e0| + U2 (x) |e1><e1|
};

UnitaryPair swapped_pair(const ComplexMatrix& u1, const ComplexMatrix& u2);

BipartiteOperator product_unitary(const ComplexMatrix& a, const ComplexMatrix& b);

BipartiteOperator haar_bipartite(std::size_t n, std::size_t d, Rng& rng);

/// sum_i U_i (x) |psi_i><psi_i| with Haar U_i and a Haar basis psi.
BipartiteOperator random_commutative(std::size_t n, std::size_t d, Rng& rng);

/// sum_i U_i (x) |phi_i><psi_i| with Haar U_i and independent Haar bases.
BipartiteOperator random_two_basis(std::size_t n, std::size_t d, Rng& rng);

/// (I (x) W) (U' (x) I_m) (I (x) W^dagger) on H (x) (C^k (x) C^m) with Haar U' on
/// H (x) C^k and Haar W: A(U) is M_k (x) I_m up to the rotation W.
BipartiteOperator random_multiplicity(std::size_t n, std::size_t k, std::size_t m, Rng& rng);

/// d couplings of rank `rank` in span: random combinations of `rank` random
/// N x N matrices.
std::vector<ComplexMatrix> random_couplings(std::size_t n, std::size_t d, std::size_t rank, Rng& rng);

struct CorpusEntry {
  std::string name;
  BipartiteOperator u;
};

/// The worked examples at the reference parameters.
std::vector<CorpusEntry> reference_examples();

/// Random Haar, commutative-form and two-basis unitaries for every
/// (N, d) in {2,3,4}^2, `per_kind` of each.
std::vector<CorpusEntry> random_corpus(std::size_t per_kind, Rng& rng);

}  // namespace envalg
