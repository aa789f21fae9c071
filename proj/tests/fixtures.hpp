#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "envalg/linalg.hpp"
#include "envalg/random.hpp"
#include "envalg/star_algebra.hpp"

namespace fixtures {

using envalg::ComplexMatrix;

/// Generators of W (sum_k M_{n_k} (x) I_{m_k}) W^dagger for a Haar W: two
/// random elements generate the whole block algebra almost surely.
inline std::vector<ComplexMatrix> block_algebra_generators(const std::vector<std::pair<std::size_t, std::size_t>>& shape,
                                                           envalg::Rng& rng) {
  std::size_t d = 0;
  for (const auto& [n, m] : shape) d += n * m;
  const ComplexMatrix w = envalg::haar_unitary(d, rng);
  std::vector<ComplexMatrix> gens;
  for (int g = 0; g < 2; ++g) {
    ComplexMatrix x = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    Eigen::Index off = 0;
    for (const auto& [n, m] : shape) {
      const auto k = static_cast<Eigen::Index>(n * m);
      x.block(off, off, k, k) = envalg::kron(envalg::random_ginibre(n, n, rng), envalg::identity(m));
      off += k;
    }
    gens.push_back(w * x * w.adjoint());
  }
  return gens;
}

inline std::size_t shape_dim(const std::vector<std::pair<std::size_t, std::size_t>>& shape) {
  std::size_t s = 0;
  for (const auto& [n, m] : shape) s += n * n;
  return s;
}

/// Every multiset of (n, m) blocks with total size sum n*m = d.
inline void shapes_of(std::size_t d, std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& out,
                      std::vector<std::pair<std::size_t, std::size_t>> prefix = {}) {
  if (d == 0) {
    out.push_back(prefix);
    return;
  }
  for (std::size_t n = 1; n <= d; ++n) {
    for (std::size_t m = 1; n * m <= d; ++m) {
      if (!prefix.empty() && std::make_pair(n, m) > prefix.back()) continue;
      auto next = prefix;
      next.emplace_back(n, m);
      shapes_of(d - n * m, out, next);
    }
  }
}

/// Largest rank of a sum of minimal central projections P with P A P
/// commutative, by exhaustive search over subsets.
inline ComplexMatrix brute_force_pc(const envalg::StarAlgebra& alg, const envalg::StructureDecomposition& sd) {
  const std::size_t b = sd.blocks.size();
  const auto d = static_cast<Eigen::Index>(alg.dim_space());
  ComplexMatrix best = ComplexMatrix::Zero(d, d);
  double best_rank = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << b); ++mask) {
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    for (std::size_t k = 0; k < b; ++k)
      if (mask & (std::size_t{1} << k)) p += sd.blocks[k].z;
    bool commutative = true;
    for (const auto& x : alg.basis()) {
      for (const auto& y : alg.basis()) {
        const ComplexMatrix px = p * x * p;
        const ComplexMatrix py = p * y * p;
        if ((px * py - py * px).norm() > 1e-8) commutative = false;
      }
    }
    const double rank = p.trace().real();
    if (commutative && rank > best_rank + 0.5) {
      best_rank = rank;
      best = p;
    }
  }
  return best;
}

}  // namespace fixtures
