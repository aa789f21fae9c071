#include "envalg/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace envalg {

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t k = 0; k + 1 < end; ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const Json& require(const Json& obj, const char* key, const std::string& pointer) {
  if (!obj.is_object()) throw ParseError(pointer.empty() ? "/" : pointer, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(pointer + "/" + key, "missing field");
  return *it;
}

std::size_t require_count(const Json& obj, const char* key) {
  const Json& v = require(obj, key, "");
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
    throw ParseError(std::string("/") + key, "expected a positive integer");
  }
  return v.get<std::size_t>();
}

Complex entry_from_json(const Json& j, const std::string& pointer) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(pointer, "expected a complex number [re, im]");
  }
  const double re = j[0].get<double>();
  const double im = j[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) throw ParseError(pointer, "non-finite entry");
  return {re, im};
}

void require_square(const ComplexMatrix& m, std::size_t n, const std::string& pointer) {
  const auto k = static_cast<Eigen::Index>(n);
  if (m.rows() != k || m.cols() != k) {
    throw ParseError(pointer, "expected a " + std::to_string(n) + "x" + std::to_string(n) +
                                  " matrix, got " + std::to_string(m.rows()) + "x" +
                                  std::to_string(m.cols()));
  }
}

}  // namespace

std::string to_string(OperatorFileKind kind) {
  switch (kind) {
    case OperatorFileKind::unitary: return "unitary";
    case OperatorFileKind::hamiltonian: return "hamiltonian";
    case OperatorFileKind::dipole: return "dipole";
  }
  return "unknown";
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& pointer) {
  if (!j.is_array()) throw ParseError(pointer, "expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return ComplexMatrix(0, 0);
  if (!j[0].is_array()) throw ParseError(pointer + "/0", "expected a row array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::string rp = pointer + "/" + std::to_string(i);
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(rp, "expected a row of " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      m(i, k) = entry_from_json(row[static_cast<std::size_t>(k)], rp + "/" + std::to_string(k));
    }
  }
  return m;
}

ComplexVector vector_from_json(const Json& j, const std::string& pointer) {
  if (!j.is_array()) throw ParseError(pointer, "expected an array of [re, im] entries");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = entry_from_json(j[k], pointer + "/" + std::to_string(k));
  }
  return v;
}

ParsedOperator parse_operator_text(std::string_view text, const std::string& source,
                                   const Tolerance& tol) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_col(text, e.byte), "malformed JSON");
  }
  if (!doc.is_object()) throw ParseError("/", "expected a JSON object");

  const Json& version = require(doc, "schema_version", "");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    throw ParseError("/schema_version", "unsupported schema version (expected " +
                                            std::to_string(kSchemaVersion) + ")");
  }
  ParsedOperator out;
  out.source = source;
  out.checksum = fnv1a_hex(text);
  if (const auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("/name", "expected a string");
    out.name = it->get<std::string>();
  }

  const Json& kind = require(doc, "kind", "");
  const std::string k = kind.is_string() ? kind.get<std::string>() : "";
  if (k == "unitary") {
    out.kind = OperatorFileKind::unitary;
  } else if (k == "hamiltonian") {
    out.kind = OperatorFileKind::hamiltonian;
  } else if (k == "dipole") {
    out.kind = OperatorFileKind::dipole;
  } else {
    throw ParseError("/kind", "expected one of unitary, hamiltonian, dipole");
  }

  const std::size_t n = require_count(doc, "sys_dim");
  if (out.kind == OperatorFileKind::dipole) {
    DipoleModel model;
    model.h_s = matrix_from_json(require(doc, "h_s", ""), "/h_s");
    require_square(model.h_s, n, "/h_s");
    const Json& cs = require(doc, "couplings", "");
    if (!cs.is_array() || cs.empty()) throw ParseError("/couplings", "expected a non-empty array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string p = "/couplings/" + std::to_string(i);
      model.couplings.push_back(matrix_from_json(cs[i], p));
      require_square(model.couplings.back(), n, p);
    }
    if (const auto it = doc.find("env_dim"); it != doc.end()) {
      if (!it->is_number_unsigned() || it->get<std::size_t>() != model.env_dim()) {
        throw ParseError("/env_dim", "must equal the number of couplings plus one (" +
                                         std::to_string(model.env_dim()) + ")");
      }
    }
    if (const auto it = doc.find("h_e"); it != doc.end()) {
      model.h_e = matrix_from_json(*it, "/h_e");
      require_square(model.h_e, model.env_dim(), "/h_e");
    }
    out.op = model.hamiltonian(tol);
    out.dipole = std::move(model);
    return out;
  }

  const std::size_t d = require_count(doc, "env_dim");
  ComplexMatrix m = matrix_from_json(require(doc, "matrix", ""), "/matrix");
  require_square(m, n * d, "/matrix");
  const OperatorKind opk = out.kind == OperatorFileKind::unitary ? OperatorKind::unitary
                                                                 : OperatorKind::hermitian;
  out.op = BipartiteOperator(n, d, std::move(m), opk, tol);
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ParsedOperator parse_operator(const std::filesystem::path& path, const Tolerance& tol) {
  const std::string text = read_file(path);
  try {
    return parse_operator_text(text, path.string(), tol);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.where(), e.message());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

ComplexVector parse_vector_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + line_col(text, e.byte), "malformed JSON");
  }
  if (doc.is_object()) return vector_from_json(require(doc, "psi", ""), "/psi");
  return vector_from_json(doc, "");
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot move report into place at " + path.string() + ": " + ec.message());
  }
}

Json operator_to_json(const std::string& name, const BipartiteOperator& op) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = name;
  j["kind"] = op.kind() == OperatorKind::hermitian ? "hamiltonian" : "unitary";
  j["sys_dim"] = op.sys_dim();
  j["env_dim"] = op.env_dim();
  j["matrix"] = matrix_to_json(op.matrix());
  return j;
}

Json dipole_to_json(const std::string& name, const DipoleModel& model) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = name;
  j["kind"] = "dipole";
  j["sys_dim"] = model.sys_dim();
  j["env_dim"] = model.env_dim();
  j["h_s"] = matrix_to_json(model.h_s);
  Json cs = Json::array();
  for (const auto& v : model.couplings) cs.push_back(matrix_to_json(v));
  j["couplings"] = std::move(cs);
  return j;
}

}  // namespace envalg
