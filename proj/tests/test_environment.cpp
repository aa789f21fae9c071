#include <doctest.h>

#include <numbers>

#include "envalg/corpus.hpp"
#include "envalg/environment.hpp"
#include "envalg/errors.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace envalg;

namespace {

std::vector<ComplexMatrix> oracle_blocks(const BipartiteOperator& u) {
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < u.sys_dim(); ++i)
    for (std::size_t j = 0; j < u.sys_dim(); ++j)
      out.push_back(oracle::sys_block(u.matrix(), u.sys_dim(), u.env_dim(), i, j));
  return out;
}

}  // namespace

TEST_CASE("emission blocks and A(U_se) = B(C^2)") {
  for (double theta : {std::numbers::pi / 6, std::numbers::pi / 3, std::numbers::pi / 2}) {
    const BipartiteOperator u = spontaneous_emission(theta);
    const BlockFamily f = env_blocks(u);
    const auto want = oracle_blocks(u);
    for (std::size_t k = 0; k < want.size(); ++k) CHECK((f.blocks[k] - want[k]).norm() < 1e-15);
    CHECK((f.reconstruct() - u.matrix()).norm() < 1e-15);

    const StarAlgebra a = environment_algebra(u);
    CHECK(a.dim() == 4);
    CHECK(a.dim() == oracle::algebra_dim(want, 2));
    CHECK(commutant(a).dim() == 1);
    CHECK(subspace_residual(environment_commutant_direct(u), StarAlgebra::scalars(2)) < 1e-8);
    CHECK(block_membership_residual(u, a) < 1e-12);
  }
  const ComplexMatrix b01 = env_blocks(spontaneous_emission(std::numbers::pi / 3)).block(0, 1);
  CHECK(std::abs(b01(1, 0) + std::sin(std::numbers::pi / 3)) < 1e-15);
  CHECK(b01.cwiseAbs().sum() == doctest::Approx(std::sin(std::numbers::pi / 3)));
}

TEST_CASE("identity has the scalar environment algebra and K_c = K") {
  const BipartiteOperator u(2, 3, identity(6), OperatorKind::unitary);
  CHECK(environment_algebra(u).dim() == 1);
  const EnvironmentSplit s = classical_quantum_split(u);
  CHECK(s.kc_dim() == 3);
  CHECK(s.kq_dim() == 0);
  CHECK(!s.u_q.has_value());
  const ClassicalForm f = commutative_form(u);
  CHECK(f.reconstruction_residual < 1e-12);
  for (const auto& ui : f.unitaries) CHECK((ui - identity(2)).norm() < 1e-12);
}

TEST_CASE("block example splits into K_c = span{e1, e2} and a two-dimensional K_q") {
  const BipartiteOperator u = block_example(0.3, 0.7, std::numbers::pi / 4);
  const EnvironmentSplit s = classical_quantum_split(u);
  CHECK(s.kc_dim() == 2);
  CHECK(s.kq_dim() == 2);
  ComplexMatrix want = ComplexMatrix::Zero(4, 4);
  want(0, 0) = want(1, 1) = 1.0;
  CHECK((s.p_c.matrix - want).norm() < 1e-8);
  CHECK(s.off_block_residual < 1e-9);
  CHECK(s.quantum_pc_rank == 0);
  REQUIRE(s.u_c.has_value());
  REQUIRE(s.u_q.has_value());
  CHECK(environment_algebra(*s.u_q).dim() == 4);

  const ClassicalForm f = commutative_form(*s.u_c);
  CHECK(f.reconstruction_residual < 1e-9);
  REQUIRE(f.unitaries.size() == 2);
  std::vector<double> angles;
  for (const auto& r : f.unitaries) {
    const Complex ph = r(0, 0) / std::abs(r(0, 0));
    angles.push_back(std::atan2((r(1, 0) / ph).real(), (r(0, 0) / ph).real()));
  }
  std::sort(angles.begin(), angles.end());
  CHECK(std::abs(angles[0] - 0.3) < 1e-9);
  CHECK(std::abs(angles[1] - 0.7) < 1e-9);

  CHECK_THROWS_AS(commutative_form(u), InputError);
}

TEST_CASE("commutative-form unitaries reconstruct and expose an orthonormal basis") {
  Rng rng(21);
  for (std::size_t n = 2; n <= 3; ++n) {
    for (std::size_t d = 2; d <= 4; ++d) {
      const BipartiteOperator u = random_commutative(n, d, rng);
      CHECK(is_commutative(environment_algebra(u)));
      const ClassicalForm f = commutative_form(u);
      CHECK(f.reconstruction_residual < 1e-9);
      CHECK(f.unitarity_residual < 1e-9);
      CHECK((f.psi.adjoint() * f.psi - identity(d)).norm() < 1e-9);
      CHECK((f.reconstruct() - u.matrix()).norm() < 1e-9);
    }
  }
}

TEST_CASE("compress_env restricts to an invariant subspace") {
  const BipartiteOperator u = block_example(0.3, 0.7, 1.0);
  ComplexMatrix q = ComplexMatrix::Zero(4, 2);
  q(2, 0) = q(3, 1) = 1.0;
  const ComplexMatrix c = compress_env(u, q);
  CHECK(c.rows() == 4);
  CHECK((c.adjoint() * c - identity(4)).norm() < 1e-12);
}

TEST_CASE("property: split invariants and the direct commutant over a random corpus") {
  Rng rng(22);
  for (const auto& e : random_corpus(1, rng)) {
    CAPTURE(e.name);
    const BipartiteOperator& u = e.u;
    const StarAlgebra a = environment_algebra(u);
    CHECK(a.closure_residual() < 1e-8);
    CHECK(block_membership_residual(u, a) < 1e-8);
    CHECK(subspace_residual(environment_commutant_direct(u), commutant(a)) < 1e-8);
    CHECK(commutant(a).dim() == oracle::commutant_dim(oracle_blocks(u), u.env_dim()));

    const EnvironmentSplit s = classical_quantum_split(u);
    CHECK(s.kc_dim() + s.kq_dim() == u.env_dim());
    CHECK(s.off_block_residual < 1e-9);
    CHECK(s.classical_commutativity_defect < 1e-9);
    CHECK(s.quantum_pc_rank == 0);
    CHECK((s.p_c.matrix - fixtures::brute_force_pc(a, s.structure)).norm() < 1e-8);
    if (s.kc_dim() > 0 && s.kq_dim() > 0) {
      CHECK((s.kc_basis.adjoint() * s.kq_basis).norm() < 1e-9);
    }
  }
}

TEST_CASE("multiplicity instances have A(U) = M_k (x) I_m") {
  Rng rng(23);
  const BipartiteOperator u = random_multiplicity(2, 2, 2, rng);
  const StarAlgebra a = environment_algebra(u);
  CHECK(a.dim() == 4);
  const StructureDecomposition sd = structure_decomposition(a);
  REQUIRE(sd.blocks.size() == 1);
  CHECK(sd.blocks[0].n == 2);
  CHECK(sd.blocks[0].m == 2);
  CHECK(commutant(a).dim() == 4);
}
