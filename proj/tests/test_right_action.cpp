#include <doctest.h>

#include <numbers>

#include "envalg/corpus.hpp"
#include "envalg/environment.hpp"
#include "envalg/errors.hpp"
#include "envalg/right_action.hpp"
#include "oracle.hpp"

using namespace envalg;

namespace {

std::size_t oracle_minimal_rank(const BipartiteOperator& u, const ComplexVector& psi) {
  const std::size_t n = u.sys_dim();
  const std::size_t d = u.env_dim();
  ComplexMatrix cols(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n * n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cols.col(static_cast<Eigen::Index>(i * n + j)) = oracle::sys_block(u.matrix(), n, d, i, j) * psi;
  return oracle::gauss_rank(cols);
}

}  // namespace

TEST_CASE("heisenberg image against the direct product") {
  Rng rng(41);
  const BipartiteOperator u = haar_bipartite(2, 3, rng);
  const ComplexMatrix x = random_ginibre(2, 2, rng);
  const ComplexMatrix want = u.matrix().adjoint() * oracle::kron(x, identity(3)) * u.matrix();
  CHECK((heisenberg_image(u, x) - want).norm() < 1e-12);
}

TEST_CASE("A_r(U_se) = B(C^2)") {
  for (double theta : {std::numbers::pi / 6, std::numbers::pi / 3, std::numbers::pi / 2}) {
    const RightActionAlgebra ar = right_action_algebra(spontaneous_emission(theta));
    CHECK(ar.alg.dim() == 4);
    CHECK(ar.containment_residual < 1e-8);
    CHECK(ar.membership_residual < 1e-8);
  }
}

TEST_CASE("swapped pair: A(U) = B(C^2), commutative A_r(U), W = swap") {
  const UnitaryPair p = swapped_pair(identity(2), pauli_z());
  CHECK(environment_algebra(p.u).dim() == 4);
  const RightActionAlgebra ar = right_action_algebra(p.u);
  CHECK(ar.alg.dim() == 2);
  CHECK(is_commutative(ar.alg));
  const auto w = same_action(p.u, p.v);
  REQUIRE(w.has_value());
  ComplexMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const Complex ip = (swap.adjoint() * w->w).trace() / 2.0;
  CHECK(std::abs(std::abs(ip) - 1.0) < 1e-12);
  CHECK((w->w - ip * swap).norm() < 1e-12);
  CHECK(w->residual < 1e-12);

  const ClassicalForm f = right_commutative_form(p.u);
  CHECK(f.reconstruction_residual < 1e-9);
  REQUIRE(f.phi.has_value());
}

TEST_CASE("same action is detected up to an environment unitary") {
  Rng rng(42);
  const BipartiteOperator u = haar_bipartite(2, 3, rng);
  const ComplexMatrix w = haar_unitary(3, rng);
  const BipartiteOperator v(2, 3, kron(identity(2), w) * u.matrix(), OperatorKind::unitary);
  CHECK(action_residual(u, v) < 1e-12);
  const auto got = same_action(u, v);
  REQUIRE(got.has_value());
  CHECK((got->w - w).norm() < 1e-10);
  CHECK(!same_action(u, haar_bipartite(2, 3, rng)).has_value());
}

TEST_CASE("property: A_r(U) is contained in A(U) and its commutant is computed twice") {
  Rng rng(43);
  for (const auto& e : random_corpus(1, rng)) {
    CAPTURE(e.name);
    const RightActionAlgebra ar = right_action_algebra(e.u);
    CHECK(containment_residual(ar.alg, environment_algebra(e.u)) < 1e-8);
    CHECK(ar.membership_residual < 1e-8);
    CHECK(subspace_residual(right_action_commutant_direct(e.u), commutant(ar.alg)) < 1e-8);
  }
}

TEST_CASE("equivalent representative on examples, random and multiplicity instances") {
  Rng rng(44);
  std::vector<BipartiteOperator> cases;
  for (const auto& e : reference_examples()) cases.push_back(e.u);
  cases.push_back(random_two_basis(2, 3, rng));
  cases.push_back(haar_bipartite(2, 2, rng));
  cases.push_back(random_multiplicity(2, 2, 2, rng));
  cases.push_back(random_multiplicity(3, 1, 3, rng));
  for (const auto& u : cases) {
    const EquivalentRepresentative r = build_equivalent_v(u);
    CHECK(r.verified);
    CHECK(r.witness.action_residual < 1e-8);
    CHECK(r.algebra_residual < 1e-8);
    const RightActionAlgebra ar = right_action_algebra(u);
    CHECK(block_membership_residual(r.witness.v, ar.alg) < 1e-8);
    CHECK(subspace_residual(environment_algebra(r.witness.v), ar.alg) < 1e-8);
    for (const auto& b : r.blocks) CHECK(b.verified);
  }
}

TEST_CASE("right commutative form on two-basis unitaries") {
  Rng rng(45);
  for (std::size_t d = 2; d <= 4; ++d) {
    const BipartiteOperator u = random_two_basis(2, d, rng);
    CHECK(is_commutative(right_action_algebra(u).alg));
    const ClassicalForm f = right_commutative_form(u);
    CHECK(f.reconstruction_residual < 1e-9);
    CHECK((f.psi.adjoint() * f.psi - identity(d)).norm() < 1e-9);
    CHECK((f.phi->adjoint() * *f.phi - identity(d)).norm() < 1e-9);
  }
  CHECK_THROWS_AS(right_commutative_form(spontaneous_emission(1.0)), InputError);
}

TEST_CASE("Stinespring minimality against the rank oracle") {
  const BipartiteOperator se = spontaneous_emission(std::numbers::pi / 3);
  const StinespringWitness w = stinespring_minimal(se, basis_vector(2, 0));
  CHECK(w.minimal);
  CHECK(w.cyclic);
  CHECK(w.block_rank == oracle_minimal_rank(se, basis_vector(2, 0)));

  Rng rng(46);
  const BipartiteOperator prod = product_unitary(haar_unitary(2, rng), haar_unitary(3, rng));
  const StinespringWitness p = stinespring_minimal(prod, random_unit_vector(3, rng));
  CHECK(!p.minimal);
  CHECK(p.block_rank == 1);
  CHECK_THROWS_AS(stinespring_minimal(se, ComplexVector::Ones(2)), InputError);

  for (int trial = 0; trial < 10; ++trial) {
    const BipartiteOperator u = haar_bipartite(2, 3, rng);
    const ComplexVector psi = random_unit_vector(3, rng);
    const StinespringWitness s = stinespring_minimal(u, psi);
    CHECK(s.block_rank == oracle_minimal_rank(u, psi));
    if (s.minimal) CHECK(s.cyclic);
  }
}

TEST_CASE("cyclic vectors") {
  CHECK(cyclic_vector(StarAlgebra::full(3), basis_vector(3, 1)));
  CHECK(!cyclic_vector(StarAlgebra::scalars(3), basis_vector(3, 1)));
  CHECK(cyclic_vector(StarAlgebra::scalars(1), basis_vector(1, 0)));
}
