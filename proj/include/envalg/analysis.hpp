#pragma once

// Orchestrates the library over one parsed operator and collects every
// residual into an AnalysisReport.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "envalg/io.hpp"
#include "envalg/random.hpp"
#include "envalg/report.hpp"

namespace envalg {

/// Threshold for subspace equalities between independently computed spaces.
inline constexpr double kSubspaceThreshold = 1e-8;
/// Entropy slack for monotonicity and the equality case.
inline constexpr double kEntropySlack = 1e-10;
/// Bound on the equality-condition residual when entropies agree.
inline constexpr double kEntropyEqualityThreshold = 1e-6;

struct AnalysisOptions {
  Tolerance tol;
  std::uint64_t seed = kDefaultSeed;

  bool blocks = true;
  bool algebra = true;
  bool right_action = true;
  bool split = true;
  bool forms = true;
  bool cpmap = true;
  bool stinespring = true;
  bool entropy = true;
  bool dipole = true;

  /// Stinespring probes; empty means every canonical basis vector.
  std::vector<ComplexVector> psi;
  std::size_t entropy_samples = 20;

  /// All sections off; callers switch on what they need.
  static AnalysisOptions none();
};

/// Unitary-only sections are skipped for Hamiltonians. Numerical faults and
/// check failures inside a section become failed checks naming the module;
/// input errors propagate.
AnalysisReport run_analysis(const ParsedOperator& input, const AnalysisOptions& options);

}  // namespace envalg
