#include "envalg/corpus.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "envalg/errors.hpp"

namespace envalg {

ComplexMatrix env_outer_to_sys_outer(const ComplexMatrix& m, std::size_t sys_dim, std::size_t env_dim) {
  const auto n = static_cast<Eigen::Index>(sys_dim);
  const auto d = static_cast<Eigen::Index>(env_dim);
  if (m.rows() != n * d || m.cols() != n * d) {
    throw DimensionError("env_outer_to_sys_outer: matrix is not (N d) x (N d)");
  }
  ComplexMatrix out(n * d, n * d);
  for (Eigen::Index ei = 0; ei < d; ++ei) {
    for (Eigen::Index si = 0; si < n; ++si) {
      for (Eigen::Index ej = 0; ej < d; ++ej) {
        for (Eigen::Index sj = 0; sj < n; ++sj) {
          out(si * d + ei, sj * d + ej) = m(ei * n + si, ej * n + sj);
        }
      }
    }
  }
  return out;
}

ComplexMatrix rotation(double angle) {
  ComplexMatrix r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

ComplexMatrix pauli_x() {
  ComplexMatrix p(2, 2);
  p << 0.0, 1.0, 1.0, 0.0;
  return p;
}

ComplexMatrix pauli_y() {
  ComplexMatrix p(2, 2);
  p << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return p;
}

ComplexMatrix pauli_z() {
  ComplexMatrix p(2, 2);
  p << 1.0, 0.0, 0.0, -1.0;
  return p;
}

BipartiteOperator spontaneous_emission(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  ComplexMatrix u(4, 4);
  u << 1, 0, 0, 0,
       0, c, -s, 0,
       0, s, c, 0,
       0, 0, 0, 1;
  return BipartiteOperator(2, 2, u, OperatorKind::unitary);
}

BipartiteOperator block_example(double alpha, double beta, double theta) {
  ComplexMatrix env_outer = ComplexMatrix::Zero(8, 8);
  env_outer.block(0, 0, 2, 2) = rotation(alpha);
  env_outer.block(2, 2, 2, 2) = rotation(beta);
  env_outer.block(4, 4, 4, 4) = spontaneous_emission(theta).matrix();
  return BipartiteOperator(2, 4, env_outer_to_sys_outer(env_outer, 2, 4), OperatorKind::unitary);
}

UnitaryPair swapped_pair(const ComplexMatrix& u1, const ComplexMatrix& u2) {
  const auto n = static_cast<std::size_t>(u1.rows());
  const ComplexMatrix u = kron(u2, matrix_unit(2, 0, 1)) + kron(u1, matrix_unit(2, 1, 0));
  const ComplexMatrix v = kron(u1, matrix_unit(2, 0, 0)) + kron(u2, matrix_unit(2, 1, 1));
  return {BipartiteOperator(n, 2, u, OperatorKind::unitary),
          BipartiteOperator(n, 2, v, OperatorKind::unitary)};
}

BipartiteOperator product_unitary(const ComplexMatrix& a, const ComplexMatrix& b) {
  return BipartiteOperator(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.rows()),
                           kron(a, b), OperatorKind::unitary);
}

BipartiteOperator haar_bipartite(std::size_t n, std::size_t d, Rng& rng) {
  return BipartiteOperator(n, d, haar_unitary(n * d, rng), OperatorKind::unitary);
}

BipartiteOperator random_commutative(std::size_t n, std::size_t d, Rng& rng) {
  const ComplexMatrix psi = haar_unitary(d, rng);
  ComplexMatrix u = ComplexMatrix::Zero(static_cast<Eigen::Index>(n * d), static_cast<Eigen::Index>(n * d));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d); ++i) {
    u += kron(haar_unitary(n, rng), psi.col(i) * psi.col(i).adjoint());
  }
  return BipartiteOperator(n, d, u, OperatorKind::unitary);
}

BipartiteOperator random_two_basis(std::size_t n, std::size_t d, Rng& rng) {
  const ComplexMatrix psi = haar_unitary(d, rng);
  const ComplexMatrix phi = haar_unitary(d, rng);
  ComplexMatrix u = ComplexMatrix::Zero(static_cast<Eigen::Index>(n * d), static_cast<Eigen::Index>(n * d));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d); ++i) {
    u += kron(haar_unitary(n, rng), phi.col(i) * psi.col(i).adjoint());
  }
  return BipartiteOperator(n, d, u, OperatorKind::unitary);
}

BipartiteOperator random_multiplicity(std::size_t n, std::size_t k, std::size_t m, Rng& rng) {
  const std::size_t d = k * m;
  const ComplexMatrix inner = kron(haar_unitary(n * k, rng), identity(m));
  const ComplexMatrix w = kron(identity(n), haar_unitary(d, rng));
  return BipartiteOperator(n, d, w * inner * w.adjoint(), OperatorKind::unitary);
}

std::vector<ComplexMatrix> random_couplings(std::size_t n, std::size_t d, std::size_t rank, Rng& rng) {
  std::vector<ComplexMatrix> base;
  for (std::size_t r = 0; r < rank; ++r) base.push_back(random_ginibre(n, n, rng));
  const ComplexMatrix mix = random_ginibre(rank, d, rng);
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < d; ++i) {
    ComplexMatrix v = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < rank; ++r) {
      v += mix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) * base[r];
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<CorpusEntry> reference_examples() {
  using std::numbers::pi;
  std::vector<CorpusEntry> out;
  out.push_back({"emission_pi_6", spontaneous_emission(pi / 6)});
  out.push_back({"emission_pi_3", spontaneous_emission(pi / 3)});
  out.push_back({"emission_pi_2", spontaneous_emission(pi / 2)});
  out.push_back({"block_example", block_example(0.3, 0.7, pi / 4)});
  const UnitaryPair pair = swapped_pair(identity(2), pauli_z());
  out.push_back({"swapped_pair_u", pair.u});
  out.push_back({"swapped_pair_v", pair.v});
  return out;
}

std::vector<CorpusEntry> random_corpus(std::size_t per_kind, Rng& rng) {
  std::vector<CorpusEntry> out;
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t d = 2; d <= 4; ++d) {
      const std::string tag = std::to_string(n) + "x" + std::to_string(d) + "_";
      for (std::size_t k = 0; k < per_kind; ++k) {
        out.push_back({"haar_" + tag + std::to_string(k), haar_bipartite(n, d, rng)});
        out.push_back({"commutative_" + tag + std::to_string(k), random_commutative(n, d, rng)});
        out.push_back({"two_basis_" + tag + std::to_string(k), random_two_basis(n, d, rng)});
      }
    }
  }
  return out;
}

}  // namespace envalg
