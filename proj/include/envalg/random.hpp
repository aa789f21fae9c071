#pragma once

// Seeded samplers. Every routine takes the generator explicitly; nothing in
// the library touches global random state.

#include <cstdint>
#include <random>
#include <vector>

#include "envalg/linalg.hpp"

namespace envalg {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20161031;

ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase of R's
/// diagonal removed).
ComplexMatrix haar_unitary(std::size_t n, Rng& rng);

ComplexMatrix random_hermitian(std::size_t n, Rng& rng);

/// Full-rank density matrix G G^dagger / Tr from a Ginibre G.
ComplexMatrix random_density(std::size_t n, Rng& rng);

ComplexVector random_unit_vector(std::size_t n, Rng& rng);

/// Standard normal reals.
std::vector<double> random_normals(std::size_t count, Rng& rng);

}  // namespace envalg
