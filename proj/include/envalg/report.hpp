#pragma once

// The analysis report and its JSON form. Every check carries a residual and
// the threshold it was compared against.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "envalg/io.hpp"
#include "envalg/linalg.hpp"

namespace envalg {

struct InputDescriptor {
  std::string name;
  std::string source;
  std::string kind;
  std::size_t sys_dim = 0;
  std::size_t env_dim = 0;
  std::string checksum;
};

struct CheckRecord {
  std::string name;
  std::string module;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string note;
};

struct BlockSummary {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t rank = 0;
};

struct AlgebraSummary {
  std::size_t dim = 0;
  bool commutative = false;
  double commutativity_defect = 0.0;
  std::size_t commutant_dim = 0;
  std::size_t center_dim = 0;
  std::vector<BlockSummary> blocks;
};

struct SplitSummary {
  std::size_t kc_dim = 0;
  std::size_t kq_dim = 0;
  ComplexMatrix kc_basis;
  ComplexMatrix kq_basis;
  double off_block_residual = 0.0;
};

struct FormSummary {
  std::string target;  // "U", "U_c" or "U (right-action)"
  std::vector<ComplexMatrix> unitaries;
  ComplexMatrix psi;
  std::optional<ComplexMatrix> phi;
  double reconstruction_residual = 0.0;
  double unitarity_residual = 0.0;
};

struct EquivalenceSummary {
  bool verified = false;
  ComplexMatrix w;
  double action_residual = 0.0;
  double algebra_residual = 0.0;
  std::vector<CheckRecord> blocks;
};

struct StinespringSummary {
  ComplexVector psi;
  bool minimal = false;
  bool cyclic = false;
  std::size_t block_rank = 0;
  std::size_t algebra_rank = 0;
};

struct SpectralSummary {
  std::size_t fixed_dim = 0;
  std::size_t singular_one_dim = 0;
  double top_singular_value = 0.0;
};

struct EntropySummary {
  std::size_t samples = 0;
  double min_increase = 0.0;
  std::size_t equal_cases = 0;
  double max_equality_residual_when_equal = 0.0;
};

struct DipoleSummary {
  std::string case_tag;
  std::size_t m = 0;
  double tail_norm = 0.0;
  double theta = 0.0;
  ComplexVector a;
  ComplexMatrix k1_basis;
  ComplexMatrix k2_basis;
  double algebra_residual = 0.0;
  double reconstruction_residual = 0.0;
};

struct AnalysisReport {
  int schema_version = kSchemaVersion;
  InputDescriptor input;
  double tol_rank = 0.0;
  double tol_eq = 0.0;
  std::uint64_t seed = 0;
  std::optional<AlgebraSummary> environment_algebra;
  std::optional<AlgebraSummary> right_action_algebra;
  std::optional<SplitSummary> split;
  std::vector<FormSummary> forms;
  std::optional<EquivalenceSummary> equivalence;
  std::optional<SpectralSummary> spectral;
  std::vector<StinespringSummary> stinespring;
  std::optional<EntropySummary> entropy;
  std::optional<DipoleSummary> dipole;
  std::vector<CheckRecord> checks;

  bool passed() const;
  /// Appends a check; `passed` is residual <= threshold.
  void add_check(std::string name, std::string module, double residual, double threshold,
                 std::string note = {});
};

Json report_to_json(const AnalysisReport& r);
/// Throws ParseError on schema mismatches.
AnalysisReport report_from_json(const Json& j);

/// Pretty-printed JSON with a trailing newline.
std::string dump_report(const AnalysisReport& r);

}  // namespace envalg
