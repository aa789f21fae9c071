#include <doctest.h>

#include <numbers>

#include "envalg/corpus.hpp"
#include "envalg/dipole.hpp"
#include "envalg/environment.hpp"
#include "envalg/errors.hpp"
#include "oracle.hpp"

using namespace envalg;

namespace {

DipoleModel model(const ComplexMatrix& h_s, std::vector<ComplexMatrix> couplings) {
  DipoleModel m;
  m.h_s = h_s;
  m.couplings = std::move(couplings);
  return m;
}

ComplexMatrix assemble(const DipoleModel& m) {
  const std::size_t d1 = m.env_dim();
  ComplexMatrix h = oracle::kron(m.h_s, ComplexMatrix::Identity(d1, d1));
  for (std::size_t i = 0; i < m.couplings.size(); ++i) {
    h += oracle::kron(m.couplings[i], matrix_unit(d1, i + 1, 0));
    h += oracle::kron(m.couplings[i].adjoint(), matrix_unit(d1, 0, i + 1));
  }
  return h;
}

}  // namespace

TEST_CASE("hamiltonian assembly matches the elementwise sum") {
  Rng rng(31);
  const DipoleModel m = model(random_hermitian(3, rng), random_couplings(3, 3, 2, rng));
  CHECK((m.hamiltonian().matrix() - assemble(m)).norm() < 1e-13);
  CHECK(m.env_dim() == 4);
}

TEST_CASE("sigma_x alone is the commutative case with theta = 0") {
  const ClassificationResult c = dipole_classify(model(ComplexMatrix::Zero(2, 2), {pauli_x()}));
  CHECK(c.case_tag == DipoleCase::commutative_rank_one);
  CHECK(std::abs(c.theta) < 1e-12);
  CHECK(c.reduction.m == 1);
  CHECK(is_commutative(c.algebra));
  CHECK(c.algebra.dim() == 2);
  CHECK(c.reconstruction_residual < 1e-12);
  CHECK(c.algebra_residual < 1e-8);
  REQUIRE(c.a.size() == 1);
  CHECK(std::abs(std::abs(c.a(0)) - 1.0) < 1e-12);
}

TEST_CASE("{sigma_x, sigma_z} is the block case with A(H) = B(C^3)") {
  const ClassificationResult c = dipole_classify(model(ComplexMatrix::Zero(2, 2), {pauli_x(), pauli_z()}));
  CHECK(c.case_tag == DipoleCase::block_split);
  CHECK(c.reduction.m == 2);
  CHECK(c.algebra.dim() == 9);
  CHECK(subspace_residual(c.algebra, StarAlgebra::full(3)) < 1e-8);
  CHECK(c.k1_basis.cols() == 3);
  CHECK(c.k2_basis.cols() == 0);
}

TEST_CASE("theta follows V^dagger = e^{i theta} V for phased couplings") {
  for (double phi : {0.2, -0.9, 1.3}) {
    const Complex ph = std::polar(1.0, phi);
    const ClassificationResult c = dipole_classify(model(pauli_z(), {ph * pauli_x(), 0.5 * ph * pauli_x()}));
    CHECK(c.case_tag == DipoleCase::commutative_rank_one);
    CHECK(c.reduction.m == 1);
    CHECK(c.reduction.tail_norm < 1e-10);
    const Complex want = std::polar(1.0, -2.0 * phi);
    CHECK(std::abs(std::polar(1.0, c.theta) - want) < 1e-10);
    CHECK(c.reconstruction_residual < 1e-9);
    CHECK(is_commutative(c.algebra));
  }
  const ClassificationResult skew = dipole_classify(model(ComplexMatrix::Zero(2, 2), {Complex(0, 1) * pauli_y()}));
  CHECK(std::abs(std::polar(1.0, skew.theta) + 1.0) < 1e-10);
}

TEST_CASE("block case splits off the untouched environment directions") {
  Rng rng(32);
  const auto vs = random_couplings(2, 3, 2, rng);
  const ClassificationResult c = dipole_classify(model(ComplexMatrix::Zero(2, 2), vs));
  CHECK(c.case_tag == DipoleCase::block_split);
  CHECK(c.reduction.m == 2);
  CHECK(c.k1_basis.cols() == 3);
  CHECK(c.k2_basis.cols() == 1);
  CHECK(c.algebra.dim() == 10);
  CHECK(c.algebra_residual < 1e-8);
}

TEST_CASE("zero couplings give the scalar algebra") {
  const ClassificationResult c = dipole_classify(model(pauli_z(), {ComplexMatrix::Zero(2, 2)}));
  CHECK(c.reduction.m == 0);
  CHECK(c.case_tag == DipoleCase::commutative_rank_one);
  CHECK(c.algebra.dim() == 1);
}

TEST_CASE("property: reduction cancels exactly d - m components") {
  Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(trial % 4);
    const std::size_t rank = static_cast<std::size_t>(trial / 4) % (d + 1);
    const auto vs = random_couplings(2, d, rank, rng);
    const DipoleReduction r = dipole_reduce(vs);
    CHECK(r.m == oracle::gauss_rank(oracle::columns(vs)));
    CHECK(r.m == rank);
    CHECK(r.tail_norm <= 1e-10);
    CHECK((r.w.adjoint() * r.w - identity(d)).norm() < 1e-12);
    for (std::size_t i = 0; i < d; ++i) {
      ComplexMatrix back = ComplexMatrix::Zero(2, 2);
      for (std::size_t k = 0; k < d; ++k) back += r.w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * r.transformed[k];
      CHECK((back - vs[i]).norm() < 1e-10);
    }
    for (std::size_t k = 0; k < r.m; ++k) CHECK(r.transformed[k].norm() > 1e-6);
  }
}

TEST_CASE("dipole input validation") {
  DipoleModel bad = model(matrix_unit(2, 0, 1), {pauli_x()});
  CHECK_THROWS(bad.validate());
  DipoleModel with_env = model(pauli_z(), {pauli_x()});
  with_env.h_e = pauli_x();
  CHECK_THROWS_AS(dipole_classify(with_env), InputError);
  CHECK((dipole_environment_matrix(0.4, ComplexVector::Ones(2)).adjoint() -
         dipole_environment_matrix(0.4, ComplexVector::Ones(2))).norm() < 1e-14);
}
