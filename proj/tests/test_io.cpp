#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <string>
#include <sys/wait.h>

#include "envalg/analysis.hpp"
#include "envalg/corpus.hpp"
#include "envalg/errors.hpp"
#include "envalg/io.hpp"
#include "envalg/report.hpp"

using namespace envalg;
namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = fs::path(ENVALG_DATA_DIR) / "corpus";

std::string parse_error_where(const std::string& text) {
  try {
    parse_operator_text(text, "inline");
  } catch (const ParseError& e) {
    return e.where();
  }
  return "<no error>";
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "envalg_tests";
  fs::create_directories(dir);
  return dir / name;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ENVALG_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("corpus files parse into the expected operators") {
  const ParsedOperator se = parse_operator(kCorpus / "emission_pi_3.json");
  CHECK(se.kind == OperatorFileKind::unitary);
  CHECK(se.op.sys_dim() == 2);
  CHECK(se.op.env_dim() == 2);
  CHECK((se.op.matrix() - spontaneous_emission(std::numbers::pi / 3).matrix()).norm() < 1e-15);
  CHECK(se.checksum.size() == 16);

  const ParsedOperator id = parse_operator(kCorpus / "identity_2x3.json");
  CHECK(id.op.total_dim() == 6);

  const ParsedOperator ex = parse_operator(kCorpus / "block_example.json");
  CHECK((ex.op.matrix() - block_example(0.3, 0.7, std::numbers::pi / 4).matrix()).norm() < 1e-15);

  const ParsedOperator dip = parse_operator(kCorpus / "dipole_sx_sz.json");
  REQUIRE(dip.dipole.has_value());
  CHECK(dip.op.env_dim() == 3);
  CHECK(dip.op.kind() == OperatorKind::hermitian);
}

TEST_CASE("non-unitary input is rejected with its residual") {
  try {
    parse_operator(kCorpus / "non_unitary.json");
    FAIL("expected rejection");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("0.100000") != std::string::npos);
    CHECK(msg.find("non_unitary.json") != std::string::npos);
  }
}

TEST_CASE("parse errors name the line or the field") {
  CHECK(parse_error_where("{\n  \"schema_version\": 1,\n  \"kind\": ]\n}") == "line 3, column 11");
  CHECK(parse_error_where(R"({"kind": "unitary"})") == "/schema_version");
  CHECK(parse_error_where(R"({"schema_version": 2})") == "/schema_version");
  CHECK(parse_error_where(R"({"schema_version": 1, "kind": "mixed"})") == "/kind");
  CHECK(parse_error_where(R"({"schema_version": 1, "kind": "unitary", "sys_dim": 1})") == "/env_dim");
  CHECK(parse_error_where(R"({"schema_version": 1, "kind": "unitary", "sys_dim": 0, "env_dim": 1})") ==
        "/sys_dim");
  CHECK(parse_error_where(R"({"schema_version": 1, "kind": "unitary", "sys_dim": 1, "env_dim": 2,
                              "matrix": [[[1, 0], [0, 0]], [[0, 0], [1]]]})") == "/matrix/1/1");
  CHECK(parse_error_where(R"({"schema_version": 1, "kind": "unitary", "sys_dim": 1, "env_dim": 2,
                              "matrix": [[[1, 0]], [[1, 0]]]})") == "/matrix");
  CHECK(parse_error_where(R"({"schema_version": 1, "kind": "dipole", "sys_dim": 1, "env_dim": 3,
                              "h_s": [[[0, 0]]], "couplings": [[[[1, 0]]]]})") == "/env_dim");
  CHECK(parse_error_where(R"({"schema_version": 1, "kind": "dipole", "sys_dim": 1,
                              "h_s": [[[0, 0]]], "couplings": []})") == "/couplings");
  CHECK_THROWS_AS(parse_operator(kCorpus / "does_not_exist.json"), InputError);
}

TEST_CASE("operator files round-trip") {
  Rng rng(61);
  const BipartiteOperator u = haar_bipartite(3, 2, rng);
  const std::string text = operator_to_json("haar", u).dump();
  const ParsedOperator back = parse_operator_text(text, "inline");
  CHECK(back.name == "haar");
  CHECK((back.op.matrix() - u.matrix()).norm() == 0.0);
  CHECK(back.checksum == fnv1a_hex(text));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("psi files") {
  const fs::path p = scratch("psi.json");
  write_file_atomic(p, R"({"psi": [[0.6, 0], [0, 0.8]]})");
  const ComplexVector v = parse_vector_file(p);
  CHECK(v.size() == 2);
  CHECK(std::abs(v(1) - Complex(0, 0.8)) < 1e-15);
  write_file_atomic(p, R"([[1, 0]])");
  CHECK(parse_vector_file(p).size() == 1);
  CHECK(!fs::exists(p.string() + ".tmp"));
}

TEST_CASE("analysis reports on the reference inputs") {
  AnalysisOptions o;
  const AnalysisReport se = run_analysis(parse_operator(kCorpus / "emission_pi_3.json"), o);
  CHECK(se.passed());
  REQUIRE(se.environment_algebra.has_value());
  CHECK(se.environment_algebra->dim == 4);
  CHECK(se.right_action_algebra->dim == 4);
  CHECK(se.split->kc_dim == 0);
  CHECK(se.spectral.has_value());

  const AnalysisReport ex = run_analysis(parse_operator(kCorpus / "block_example.json"), o);
  CHECK(ex.passed());
  CHECK(ex.split->kc_dim == 2);
  CHECK(ex.split->kq_dim == 2);
  REQUIRE(!ex.forms.empty());
  CHECK(ex.forms[0].target == "U_c");

  const AnalysisReport id = run_analysis(parse_operator(kCorpus / "identity_2x3.json"), o);
  CHECK(id.passed());
  CHECK(id.environment_algebra->dim == 1);
  CHECK(id.split->kc_dim == 3);
  REQUIRE(!id.forms.empty());
  CHECK(id.forms[0].target == "U");
  for (const auto& c : id.checks) {
    CAPTURE(c.name);
    CHECK(c.threshold >= 0.0);
  }

  const AnalysisReport dip = run_analysis(parse_operator(kCorpus / "dipole_sx.json"), o);
  CHECK(dip.passed());
  REQUIRE(dip.dipole.has_value());
  CHECK(dip.dipole->case_tag == "commutative-rank-one");
  CHECK(!dip.spectral.has_value());
}

TEST_CASE("reports round-trip losslessly and are deterministic") {
  for (const char* name : {"emission_pi_6.json", "block_example.json", "swapped_pair_u.json", "dipole_sx_sz.json",
                           "identity_2x3.json"}) {
    CAPTURE(name);
    const ParsedOperator in = parse_operator(kCorpus / name);
    AnalysisOptions o;
    o.psi.push_back(basis_vector(in.op.env_dim(), 0));
    const AnalysisReport r = run_analysis(in, o);
    const std::string text = dump_report(r);
    CHECK(dump_report(report_from_json(Json::parse(text))) == text);
    CHECK(dump_report(run_analysis(in, o)) == text);
  }
  CHECK_THROWS_AS(report_from_json(Json::parse(R"({"schema_version": 1})")), ParseError);
}

TEST_CASE("cli exit codes") {
  const std::string corpus = kCorpus.string() + "/";
  CHECK(run_cli("analyze " + corpus + "emission_pi_3.json") == 0);
  CHECK(run_cli("blocks " + corpus + "emission_pi_3.json") == 0);
  CHECK(run_cli("algebra " + corpus + "block_example.json") == 0);
  CHECK(run_cli("right-action " + corpus + "swapped_pair_u.json") == 0);
  CHECK(run_cli("split " + corpus + "block_example.json") == 0);
  CHECK(run_cli("classical-form " + corpus + "block_example.json") == 0);
  CHECK(run_cli("cpmap " + corpus + "emission_pi_6.json") == 0);
  CHECK(run_cli("stinespring " + corpus + "emission_pi_3.json --psi 0") == 0);
  CHECK(run_cli("dipole " + corpus + "dipole_sx.json") == 0);
  CHECK(run_cli("selfcheck") == 0);

  CHECK(run_cli("analyze " + corpus + "non_unitary.json") == 2);
  CHECK(run_cli("analyze " + corpus + "missing.json") == 2);
  CHECK(run_cli("dipole " + corpus + "emission_pi_3.json") == 2);
  CHECK(run_cli("stinespring " + corpus + "emission_pi_3.json --psi 5") == 2);
  CHECK(run_cli("analyze --tol-eq 2 " + corpus + "emission_pi_3.json") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("analyze --tol-eq 1e-300 " + corpus + "identity_2x3.json") == 1);
}

TEST_CASE("cli report is written atomically and byte-identical across runs") {
  const fs::path a = scratch("a.json");
  const fs::path b = scratch("b.json");
  const std::string in = (kCorpus / "swapped_pair_u.json").string();
  REQUIRE(run_cli("analyze " + in + " --seed 7 --report " + a.string()) == 0);
  REQUIRE(run_cli("analyze " + in + " --seed 7 --report " + b.string()) == 0);
  CHECK(read_file(a) == read_file(b));
  CHECK(!fs::exists(a.string() + ".tmp"));
  const AnalysisReport r = report_from_json(Json::parse(read_file(a)));
  CHECK(r.seed == 7);
  CHECK(r.passed());
}
