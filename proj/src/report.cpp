#include "envalg/report.hpp"

#include <algorithm>

namespace envalg {

bool AnalysisReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed; });
}

void AnalysisReport::add_check(std::string name, std::string module, double residual, double threshold,
                               std::string note) {
  checks.push_back({std::move(name), std::move(module), residual, threshold, residual <= threshold,
                    std::move(note)});
}

namespace {

const Json& field(const Json& j, const char* key, const std::string& at) {
  if (!j.is_object()) throw ParseError(at.empty() ? "/" : at, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(at + "/" + key, "missing field");
  return *it;
}

template <typename T>
T get(const Json& j, const char* key, const std::string& at) {
  const Json& v = field(j, key, at);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(at + "/" + key, "wrong type");
  }
}

ComplexMatrix get_matrix(const Json& j, const char* key, const std::string& at) {
  return matrix_from_json(field(j, key, at), at + "/" + key);
}

// Column bases may have zero columns, which a row-major array cannot express.
Json basis_to_json(const ComplexMatrix& q) {
  return Json{{"rows", q.rows()}, {"cols", q.cols()}, {"entries", matrix_to_json(q)}};
}

ComplexMatrix basis_from_json(const Json& j, const char* key, const std::string& at) {
  const Json& b = field(j, key, at);
  const std::string p = at + "/" + key;
  const auto rows = get<Eigen::Index>(b, "rows", p);
  const auto cols = get<Eigen::Index>(b, "cols", p);
  if (cols == 0) return ComplexMatrix(rows, 0);
  ComplexMatrix m = matrix_from_json(field(b, "entries", p), p + "/entries");
  if (m.rows() != rows || m.cols() != cols) throw ParseError(p, "shape mismatch");
  return m;
}

Json check_to_json(const CheckRecord& c) {
  return Json{{"name", c.name},         {"module", c.module}, {"residual", c.residual},
              {"threshold", c.threshold}, {"passed", c.passed}, {"note", c.note}};
}

CheckRecord check_from_json(const Json& j, const std::string& at) {
  CheckRecord c;
  c.name = get<std::string>(j, "name", at);
  c.module = get<std::string>(j, "module", at);
  c.residual = get<double>(j, "residual", at);
  c.threshold = get<double>(j, "threshold", at);
  c.passed = get<bool>(j, "passed", at);
  c.note = get<std::string>(j, "note", at);
  return c;
}

Json algebra_to_json(const AlgebraSummary& a) {
  Json blocks = Json::array();
  for (const auto& b : a.blocks) blocks.push_back({{"n", b.n}, {"m", b.m}, {"rank", b.rank}});
  return Json{{"dim", a.dim},
              {"commutative", a.commutative},
              {"commutativity_defect", a.commutativity_defect},
              {"commutant_dim", a.commutant_dim},
              {"center_dim", a.center_dim},
              {"blocks", blocks}};
}

AlgebraSummary algebra_from_json(const Json& j, const std::string& at) {
  AlgebraSummary a;
  a.dim = get<std::size_t>(j, "dim", at);
  a.commutative = get<bool>(j, "commutative", at);
  a.commutativity_defect = get<double>(j, "commutativity_defect", at);
  a.commutant_dim = get<std::size_t>(j, "commutant_dim", at);
  a.center_dim = get<std::size_t>(j, "center_dim", at);
  const Json& blocks = field(j, "blocks", at);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const std::string p = at + "/blocks/" + std::to_string(k);
    a.blocks.push_back({get<std::size_t>(blocks[k], "n", p), get<std::size_t>(blocks[k], "m", p),
                        get<std::size_t>(blocks[k], "rank", p)});
  }
  return a;
}

Json form_to_json(const FormSummary& f) {
  Json us = Json::array();
  for (const auto& u : f.unitaries) us.push_back(matrix_to_json(u));
  Json j{{"target", f.target},
         {"unitaries", us},
         {"psi", matrix_to_json(f.psi)},
         {"phi", f.phi ? matrix_to_json(*f.phi) : Json(nullptr)},
         {"reconstruction_residual", f.reconstruction_residual},
         {"unitarity_residual", f.unitarity_residual}};
  return j;
}

FormSummary form_from_json(const Json& j, const std::string& at) {
  FormSummary f;
  f.target = get<std::string>(j, "target", at);
  const Json& us = field(j, "unitaries", at);
  for (std::size_t k = 0; k < us.size(); ++k) {
    f.unitaries.push_back(matrix_from_json(us[k], at + "/unitaries/" + std::to_string(k)));
  }
  f.psi = get_matrix(j, "psi", at);
  if (!field(j, "phi", at).is_null()) f.phi = get_matrix(j, "phi", at);
  f.reconstruction_residual = get<double>(j, "reconstruction_residual", at);
  f.unitarity_residual = get<double>(j, "unitarity_residual", at);
  return f;
}

template <typename T, typename F>
Json optional_to_json(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : Json(nullptr);
}

}  // namespace

Json report_to_json(const AnalysisReport& r) {
  Json j;
  j["schema_version"] = r.schema_version;
  j["input"] = {{"name", r.input.name},       {"source", r.input.source},
                {"kind", r.input.kind},       {"sys_dim", r.input.sys_dim},
                {"env_dim", r.input.env_dim}, {"checksum", r.input.checksum}};
  j["tolerances"] = {{"rank_rel", r.tol_rank}, {"eq_abs", r.tol_eq}};
  j["seed"] = r.seed;
  j["passed"] = r.passed();
  j["environment_algebra"] = optional_to_json(r.environment_algebra, algebra_to_json);
  j["right_action_algebra"] = optional_to_json(r.right_action_algebra, algebra_to_json);
  j["split"] = optional_to_json(r.split, [](const SplitSummary& s) {
    return Json{{"kc_dim", s.kc_dim},
                {"kq_dim", s.kq_dim},
                {"kc_basis", basis_to_json(s.kc_basis)},
                {"kq_basis", basis_to_json(s.kq_basis)},
                {"off_block_residual", s.off_block_residual}};
  });
  Json forms = Json::array();
  for (const auto& f : r.forms) forms.push_back(form_to_json(f));
  j["classical_forms"] = std::move(forms);
  j["equivalent_representative"] = optional_to_json(r.equivalence, [](const EquivalenceSummary& e) {
    Json blocks = Json::array();
    for (const auto& b : e.blocks) blocks.push_back(check_to_json(b));
    return Json{{"verified", e.verified},
                {"w", matrix_to_json(e.w)},
                {"action_residual", e.action_residual},
                {"algebra_residual", e.algebra_residual},
                {"blocks", blocks}};
  });
  j["spectral"] = optional_to_json(r.spectral, [](const SpectralSummary& s) {
    return Json{{"fixed_dim", s.fixed_dim},
                {"singular_one_dim", s.singular_one_dim},
                {"top_singular_value", s.top_singular_value}};
  });
  Json st = Json::array();
  for (const auto& s : r.stinespring) {
    st.push_back({{"psi", vector_to_json(s.psi)},
                  {"minimal", s.minimal},
                  {"cyclic", s.cyclic},
                  {"block_rank", s.block_rank},
                  {"algebra_rank", s.algebra_rank}});
  }
  j["stinespring"] = std::move(st);
  j["entropy"] = optional_to_json(r.entropy, [](const EntropySummary& e) {
    return Json{{"samples", e.samples},
                {"min_increase", e.min_increase},
                {"equal_cases", e.equal_cases},
                {"max_equality_residual_when_equal", e.max_equality_residual_when_equal}};
  });
  j["dipole"] = optional_to_json(r.dipole, [](const DipoleSummary& d) {
    return Json{{"case", d.case_tag},
                {"m", d.m},
                {"tail_norm", d.tail_norm},
                {"theta", d.theta},
                {"a", vector_to_json(d.a)},
                {"k1_basis", basis_to_json(d.k1_basis)},
                {"k2_basis", basis_to_json(d.k2_basis)},
                {"algebra_residual", d.algebra_residual},
                {"reconstruction_residual", d.reconstruction_residual}};
  });
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(check_to_json(c));
  j["checks"] = std::move(checks);
  return j;
}

AnalysisReport report_from_json(const Json& j) {
  AnalysisReport r;
  r.schema_version = get<int>(j, "schema_version", "");
  if (r.schema_version != kSchemaVersion) {
    throw ParseError("/schema_version", "unsupported report schema version");
  }
  const Json& in = field(j, "input", "");
  r.input.name = get<std::string>(in, "name", "/input");
  r.input.source = get<std::string>(in, "source", "/input");
  r.input.kind = get<std::string>(in, "kind", "/input");
  r.input.sys_dim = get<std::size_t>(in, "sys_dim", "/input");
  r.input.env_dim = get<std::size_t>(in, "env_dim", "/input");
  r.input.checksum = get<std::string>(in, "checksum", "/input");
  const Json& tol = field(j, "tolerances", "");
  r.tol_rank = get<double>(tol, "rank_rel", "/tolerances");
  r.tol_eq = get<double>(tol, "eq_abs", "/tolerances");
  r.seed = get<std::uint64_t>(j, "seed", "");

  if (const Json& a = field(j, "environment_algebra", ""); !a.is_null()) {
    r.environment_algebra = algebra_from_json(a, "/environment_algebra");
  }
  if (const Json& a = field(j, "right_action_algebra", ""); !a.is_null()) {
    r.right_action_algebra = algebra_from_json(a, "/right_action_algebra");
  }
  if (const Json& s = field(j, "split", ""); !s.is_null()) {
    SplitSummary out;
    out.kc_dim = get<std::size_t>(s, "kc_dim", "/split");
    out.kq_dim = get<std::size_t>(s, "kq_dim", "/split");
    out.kc_basis = basis_from_json(s, "kc_basis", "/split");
    out.kq_basis = basis_from_json(s, "kq_basis", "/split");
    out.off_block_residual = get<double>(s, "off_block_residual", "/split");
    r.split = std::move(out);
  }
  const Json& forms = field(j, "classical_forms", "");
  for (std::size_t k = 0; k < forms.size(); ++k) {
    r.forms.push_back(form_from_json(forms[k], "/classical_forms/" + std::to_string(k)));
  }
  if (const Json& e = field(j, "equivalent_representative", ""); !e.is_null()) {
    const std::string at = "/equivalent_representative";
    EquivalenceSummary out;
    out.verified = get<bool>(e, "verified", at);
    out.w = get_matrix(e, "w", at);
    out.action_residual = get<double>(e, "action_residual", at);
    out.algebra_residual = get<double>(e, "algebra_residual", at);
    const Json& blocks = field(e, "blocks", at);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      out.blocks.push_back(check_from_json(blocks[k], at + "/blocks/" + std::to_string(k)));
    }
    r.equivalence = std::move(out);
  }
  if (const Json& s = field(j, "spectral", ""); !s.is_null()) {
    r.spectral = SpectralSummary{get<std::size_t>(s, "fixed_dim", "/spectral"),
                                 get<std::size_t>(s, "singular_one_dim", "/spectral"),
                                 get<double>(s, "top_singular_value", "/spectral")};
  }
  const Json& st = field(j, "stinespring", "");
  for (std::size_t k = 0; k < st.size(); ++k) {
    const std::string at = "/stinespring/" + std::to_string(k);
    StinespringSummary s;
    s.psi = vector_from_json(field(st[k], "psi", at), at + "/psi");
    s.minimal = get<bool>(st[k], "minimal", at);
    s.cyclic = get<bool>(st[k], "cyclic", at);
    s.block_rank = get<std::size_t>(st[k], "block_rank", at);
    s.algebra_rank = get<std::size_t>(st[k], "algebra_rank", at);
    r.stinespring.push_back(std::move(s));
  }
  if (const Json& e = field(j, "entropy", ""); !e.is_null()) {
    r.entropy = EntropySummary{get<std::size_t>(e, "samples", "/entropy"),
                               get<double>(e, "min_increase", "/entropy"),
                               get<std::size_t>(e, "equal_cases", "/entropy"),
                               get<double>(e, "max_equality_residual_when_equal", "/entropy")};
  }
  if (const Json& d = field(j, "dipole", ""); !d.is_null()) {
    DipoleSummary out;
    out.case_tag = get<std::string>(d, "case", "/dipole");
    out.m = get<std::size_t>(d, "m", "/dipole");
    out.tail_norm = get<double>(d, "tail_norm", "/dipole");
    out.theta = get<double>(d, "theta", "/dipole");
    out.a = vector_from_json(field(d, "a", "/dipole"), "/dipole/a");
    out.k1_basis = basis_from_json(d, "k1_basis", "/dipole");
    out.k2_basis = basis_from_json(d, "k2_basis", "/dipole");
    out.algebra_residual = get<double>(d, "algebra_residual", "/dipole");
    out.reconstruction_residual = get<double>(d, "reconstruction_residual", "/dipole");
    r.dipole = std::move(out);
  }
  const Json& checks = field(j, "checks", "");
  for (std::size_t k = 0; k < checks.size(); ++k) {
    r.checks.push_back(check_from_json(checks[k], "/checks/" + std::to_string(k)));
  }
  return r;
}

std::string dump_report(const AnalysisReport& r) {
  return report_to_json(r).dump(2) + "\n";
}

}  // namespace envalg
