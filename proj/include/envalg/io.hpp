#pragma once

// Operator files: JSON documents with schema_version, kind, dimensions and
// complex entries as [re, im] pairs (row-major, row = i_sys * d + i_env).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "envalg/dipole.hpp"
#include "envalg/errors.hpp"
#include "envalg/linalg.hpp"

namespace envalg {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Malformed input. `where` is "line L, column C" for syntax errors or a JSON
/// pointer such as /matrix/3/1 for schema errors.
class ParseError : public InputError {
 public:
  ParseError(std::string where, const std::string& message)
      : InputError(where + ": " + message), where_(std::move(where)), message_(message) {}
  const std::string& where() const { return where_; }
  const std::string& message() const { return message_; }

 private:
  std::string where_;
  std::string message_;
};

enum class OperatorFileKind { unitary, hamiltonian, dipole };

std::string to_string(OperatorFileKind kind);

struct ParsedOperator {
  std::string name;
  std::string source;    // path as given
  std::string checksum;  // FNV-1a 64 of the file bytes, hex
  OperatorFileKind kind = OperatorFileKind::unitary;
  BipartiteOperator op;               // unitary, hamiltonian, and the assembled dipole H
  std::optional<DipoleModel> dipole;  // dipole kind only
};

/// Parses and validates; unitarity/Hermiticity are enforced to tol.eq_abs.
ParsedOperator parse_operator_text(std::string_view text, const std::string& source,
                                   const Tolerance& tol = {});
ParsedOperator parse_operator(const std::filesystem::path& path, const Tolerance& tol = {});

/// A unit vector file: {"psi": [[re, im], ...]} or a bare array.
ComplexVector parse_vector_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string fnv1a_hex(std::string_view bytes);

Json matrix_to_json(const ComplexMatrix& m);
Json vector_to_json(const ComplexVector& v);
/// `pointer` locates the value in error messages.
ComplexMatrix matrix_from_json(const Json& j, const std::string& pointer);
ComplexVector vector_from_json(const Json& j, const std::string& pointer);

Json operator_to_json(const std::string& name, const BipartiteOperator& op);
Json dipole_to_json(const std::string& name, const DipoleModel& model);

}  // namespace envalg
