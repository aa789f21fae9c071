#include <doctest.h>

#include <numbers>

#include "envalg/channel.hpp"
#include "envalg/corpus.hpp"
#include "envalg/environment.hpp"
#include "envalg/errors.hpp"
#include "envalg/right_action.hpp"
#include "oracle.hpp"

using namespace envalg;

namespace {

ComplexMatrix oracle_l(const BipartiteOperator& u, const ComplexMatrix& x) {
  const std::size_t n = u.sys_dim();
  const std::size_t d = u.env_dim();
  const ComplexMatrix in = oracle::kron(identity(n) / static_cast<double>(n), x);
  return oracle::trace_sys(u.matrix() * in * u.matrix().adjoint(), n, d);
}

}  // namespace

TEST_CASE("L and L* against direct evaluation") {
  Rng rng(51);
  const BipartiteOperator u = haar_bipartite(3, 2, rng);
  const Superoperator l = build_L(u);
  const Superoperator ls = build_Lstar(u);
  const ComplexMatrix x = random_ginibre(2, 2, rng);
  CHECK((l.apply(x) - oracle_l(u, x)).norm() < 1e-12);
  CHECK((ls.apply(x) - oracle_l(u.adjoint(), x)).norm() < 1e-12);
  CHECK((ls.matrix - l.matrix.adjoint()).norm() < 1e-12);
  CHECK((l.apply(identity(2)) - identity(2)).norm() < 1e-12);
  CHECK(std::abs(l.apply(x).trace() - x.trace()) < 1e-12);
}

TEST_CASE("frozen emission channel values") {
  const BipartiteOperator u = spontaneous_emission(std::numbers::pi / 3);
  const Superoperator l = build_L(u);
  ComplexMatrix want(2, 2);
  want << 0.625, 0.0, 0.0, 0.375;
  CHECK((l.apply(matrix_unit(2, 0, 0)) - want).norm() < 1e-14);

  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  const DensityMatrix mixed(diag);
  const DensityMatrix out(l.apply(mixed.matrix()));
  CHECK(entropy(out) == doctest::Approx(0.6881388137135884).epsilon(1e-12));
  CHECK(entropy(mixed) == doctest::Approx(0.6108643020548935).epsilon(1e-12));
  ComplexVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(entropy(DensityMatrix(l.apply(DensityMatrix::pure(plus).matrix()))) ==
        doctest::Approx(0.5623351446188083).epsilon(1e-12));
}

TEST_CASE("heisenberg channel of the emission unitary") {
  const BipartiteOperator u = spontaneous_emission(std::numbers::pi / 3);
  const Superoperator h = heisenberg_channel(u, DensityMatrix::pure(basis_vector(2, 0)));
  ComplexMatrix want = ComplexMatrix::Zero(2, 2);
  want(0, 0) = 1.0;
  want(1, 1) = 0.75;
  CHECK((h.apply(matrix_unit(2, 0, 0)) - want).norm() < 1e-14);
}

TEST_CASE("property: spectral spaces equal the commutants") {
  Rng rng(52);
  for (const auto& e : random_corpus(1, rng)) {
    CAPTURE(e.name);
    const SpectralSpace fs = fixed_space(e.u);
    const SpectralSpace so = singular_one_space(e.u);
    CHECK(fs.star_defect < 1e-9);
    CHECK(so.top_singular_value <= 1.0 + 1e-9);
    CHECK(subspace_residual(fs.space, commutant(environment_algebra(e.u))) < 1e-8);
    CHECK(subspace_residual(so.space, commutant(right_action_algebra(e.u).alg)) < 1e-8);
  }
}

TEST_CASE("entropies against the Jacobi oracle") {
  Rng rng(53);
  for (std::size_t d = 1; d <= 5; ++d) {
    const ComplexMatrix rho = random_density(d, rng);
    CHECK(entropy(DensityMatrix(rho)) == doctest::Approx(oracle::von_neumann(rho)).epsilon(1e-10));
  }
  CHECK(entropy(DensityMatrix::maximally_mixed(4)) == doctest::Approx(std::log(4.0)));
  CHECK(entropy(DensityMatrix::pure(basis_vector(3, 2))) == doctest::Approx(0.0));
  const std::vector<double> p{0.25, 0.25, 0.5};
  CHECK(shannon(p) == doctest::Approx(1.5 * std::log(2.0)));
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrix{identity(2)}, InputError);
  CHECK_THROWS_AS(DensityMatrix(matrix_unit(2, 0, 1) + matrix_unit(2, 0, 0)), InputError);
  ComplexMatrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, InputError);
  CHECK_THROWS_AS(DensityMatrix::pure(ComplexVector::Ones(2)), InputError);
}

TEST_CASE("property: entropy never decreases and equality forces the product condition") {
  Rng rng(54);
  for (int trial = 0; trial < 30; ++trial) {
    const BipartiteOperator u = haar_bipartite(2, 3, rng);
    const EntropyCheck c = entropy_check(u, DensityMatrix(random_density(3, rng)));
    CHECK(c.increased);
    CHECK(c.s_after - c.s_before >= -1e-10);
    if (c.equal) CHECK(c.equality_residual <= 1e-6);
  }
  for (int trial = 0; trial < 10; ++trial) {
    const BipartiteOperator u = product_unitary(haar_unitary(3, rng), haar_unitary(2, rng));
    const EntropyCheck c = entropy_check(u, DensityMatrix(random_density(2, rng)));
    CHECK(c.equal);
    CHECK(c.equality_condition_holds);
    CHECK(c.equality_residual < 1e-12);
  }
}
