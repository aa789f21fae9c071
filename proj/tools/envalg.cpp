// Command-line front end: one subcommand per pipeline stage, plus selfcheck
// over the shipped corpus.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "envalg/analysis.hpp"
#include "envalg/errors.hpp"
#include "envalg/io.hpp"
#include "envalg/report.hpp"
#include "envalg/right_action.hpp"

#ifndef ENVALG_DATA_DIR
#define ENVALG_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace envalg;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheck = 1;
constexpr int kExitInput = 2;

struct CommonArgs {
  double tol_rank = Tolerance{}.rank_rel;
  double tol_eq = Tolerance{}.eq_abs;
  std::uint64_t seed = kDefaultSeed;
  std::string report_path;
  std::string input;
  bool quiet = false;

  Tolerance tol() const {
    Tolerance t{tol_rank, tol_eq};
    t.validate();
    return t;
  }
};

void add_common(CLI::App* app, CommonArgs& args, bool with_input = true) {
  if (with_input) app->add_option("input", args.input, "operator file")->required();
  app->add_option("--tol-rank", args.tol_rank, "relative rank tolerance");
  app->add_option("--tol-eq", args.tol_eq, "absolute equality tolerance");
  app->add_option("--seed", args.seed, "seed for generic draws");
  app->add_option("--report", args.report_path, "write the JSON report here");
  app->add_flag("-q,--quiet", args.quiet, "print only the verdict");
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void print_algebra(const char* label, const AlgebraSummary& a) {
  std::cout << label << ": dim " << a.dim << (a.commutative ? ", commutative" : ", non-commutative")
            << ", commutant dim " << a.commutant_dim << ", center dim " << a.center_dim << ", blocks";
  for (const auto& b : a.blocks) std::cout << " (n=" << b.n << ",m=" << b.m << ")";
  std::cout << "\n";
}

void print_summary(const AnalysisReport& r) {
  std::cout << "input: " << (r.input.name.empty() ? r.input.source : r.input.name) << " (" << r.input.kind
            << ", N=" << r.input.sys_dim << ", d=" << r.input.env_dim << ", checksum " << r.input.checksum
            << ")\n";
  if (r.environment_algebra) print_algebra("A", *r.environment_algebra);
  if (r.right_action_algebra) print_algebra("A_r", *r.right_action_algebra);
  if (r.split) {
    std::cout << "split: dim K_c " << r.split->kc_dim << ", dim K_q " << r.split->kq_dim
              << (r.split->kc_dim == 0 ? " (K_c = {0})" : "") << "\n";
  }
  for (const auto& f : r.forms) {
    std::cout << "classical form on " << f.target << ": " << f.unitaries.size() << " terms, residual "
              << fmt(f.reconstruction_residual) << "\n";
  }
  if (r.equivalence) {
    std::cout << "equivalent V: " << (r.equivalence->verified ? "verified" : "NOT verified")
              << ", action residual " << fmt(r.equivalence->action_residual) << ", algebra residual "
              << fmt(r.equivalence->algebra_residual) << "\n";
    for (const auto& b : r.equivalence->blocks) {
      if (!b.passed) std::cout << "  " << b.name << " failed: " << b.note << "\n";
    }
  }
  if (r.spectral) {
    std::cout << "spectral: fixed dim " << r.spectral->fixed_dim << ", singular-one dim "
              << r.spectral->singular_one_dim << ", sigma_max " << fmt(r.spectral->top_singular_value) << "\n";
  }
  for (const auto& s : r.stinespring) {
    std::cout << "stinespring: minimal " << (s.minimal ? "yes" : "no") << ", cyclic " << (s.cyclic ? "yes" : "no")
              << " (rank " << s.block_rank << ")\n";
  }
  if (r.entropy) {
    std::cout << "entropy: " << r.entropy->samples << " samples, min increase " << fmt(r.entropy->min_increase)
              << ", " << r.entropy->equal_cases << " equality cases\n";
  }
  if (r.dipole) {
    std::cout << "dipole: " << r.dipole->case_tag << ", m " << r.dipole->m << ", tail " << fmt(r.dipole->tail_norm);
    if (r.dipole->case_tag == "commutative-rank-one") std::cout << ", theta " << fmt(r.dipole->theta);
    std::cout << "\n";
  }
  for (const auto& c : r.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " [" << c.module << "] " << fmt(c.residual)
              << " <= " << fmt(c.threshold);
    if (!c.note.empty()) std::cout << "  " << c.note;
    std::cout << "\n";
  }
}

int finish(const AnalysisReport& r, const CommonArgs& args) {
  if (!args.report_path.empty()) write_file_atomic(args.report_path, dump_report(r));
  if (!args.quiet) print_summary(r);
  std::cout << (r.passed() ? "result: pass" : "result: FAIL") << "\n";
  return r.passed() ? kExitPass : kExitCheck;
}

ComplexVector resolve_psi(const std::string& spec, std::size_t d) {
  const bool numeric = !spec.empty() && std::all_of(spec.begin(), spec.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (numeric) {
    const std::size_t k = std::stoul(spec);
    if (k >= d) throw InputError("--psi index " + spec + " out of range for d = " + std::to_string(d));
    return basis_vector(d, k);
  }
  ComplexVector v = parse_vector_file(spec);
  if (static_cast<std::size_t>(v.size()) != d) {
    throw InputError("--psi vector has length " + std::to_string(v.size()) + ", expected " + std::to_string(d));
  }
  return v;
}

// selfcheck ------------------------------------------------------------------

struct Verdict {
  bool ok = true;
  std::vector<std::string> notes;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
};

double angle_of(const ComplexMatrix& r) {
  const Complex phase = std::abs(r(0, 0)) > 1e-12 ? r(0, 0) / std::abs(r(0, 0)) : Complex(1.0);
  const ComplexMatrix n = r / phase;
  return std::atan2(n(1, 0).real(), n(0, 0).real());
}

double phase_free_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Complex ip = (b.adjoint() * a).trace();
  const Complex phase = std::abs(ip) > 0 ? ip / std::abs(ip) : Complex(1.0);
  return (a - phase * b).norm();
}

void check_expectations(const Json& expect, const AnalysisReport& r, const fs::path& dir, const Tolerance& tol,
                        const ParsedOperator& in, Verdict& v) {
  auto count = [&](const char* key) { return expect.at(key).get<std::size_t>(); };
  if (expect.contains("dim_A")) {
    v.expect(r.environment_algebra && r.environment_algebra->dim == count("dim_A"), "dim A");
  }
  if (expect.contains("dim_Ar")) {
    v.expect(r.right_action_algebra && r.right_action_algebra->dim == count("dim_Ar"), "dim A_r");
  }
  if (expect.contains("commutant_A")) {
    v.expect(r.environment_algebra && r.environment_algebra->commutant_dim == count("commutant_A"), "dim A'");
  }
  if (expect.contains("Ar_commutative")) {
    v.expect(r.right_action_algebra && r.right_action_algebra->commutative == expect["Ar_commutative"].get<bool>(),
             "A_r commutativity");
  }
  if (expect.contains("kc_dim")) v.expect(r.split && r.split->kc_dim == count("kc_dim"), "dim K_c");
  if (expect.contains("kq_dim")) v.expect(r.split && r.split->kq_dim == count("kq_dim"), "dim K_q");
  if (expect.contains("kc_span") && r.split) {
    const auto d = static_cast<Eigen::Index>(r.input.env_dim);
    ComplexMatrix target = ComplexMatrix::Zero(d, d);
    for (const auto& k : expect["kc_span"]) target(k.get<Eigen::Index>(), k.get<Eigen::Index>()) = 1.0;
    const ComplexMatrix p = r.split->kc_basis * r.split->kc_basis.adjoint();
    v.expect((p - target).norm() <= kSubspaceThreshold, "K_c span");
  }
  if (expect.contains("classical_form")) {
    const auto target = expect["classical_form"].get<std::string>();
    const auto it = std::find_if(r.forms.begin(), r.forms.end(), [&](const FormSummary& f) { return f.target == target; });
    v.expect(it != r.forms.end(), "classical form on " + target);
    if (it != r.forms.end() && expect.contains("angles")) {
      std::vector<double> want = expect["angles"].get<std::vector<double>>();
      std::vector<double> got;
      for (const auto& u : it->unitaries) got.push_back(angle_of(u));
      std::sort(want.begin(), want.end());
      std::sort(got.begin(), got.end());
      bool match = want.size() == got.size();
      for (std::size_t k = 0; match && k < want.size(); ++k) match = std::abs(want[k] - got[k]) <= 1e-9;
      v.expect(match, "rotation angles");
    }
  }
  if (expect.contains("same_action_with")) {
    const ParsedOperator other = parse_operator(dir / expect["same_action_with"].get<std::string>(), tol);
    const auto w = same_action(in.op, other.op, tol);
    v.expect(w.has_value(), "same action");
    if (w && expect.contains("w")) {
      const ComplexMatrix want = matrix_from_json(
          [&] {
            Json rows = Json::array();
            for (const auto& row : expect["w"]) {
              Json out = Json::array();
              for (const auto& x : row) out.push_back({x.get<double>(), 0.0});
              rows.push_back(out);
            }
            return rows;
          }(),
          "/w");
      v.expect(phase_free_distance(w->w, want) <= 1e-12, "W up to phase");
    }
  }
  if (expect.contains("case")) {
    v.expect(r.dipole && r.dipole->case_tag == expect["case"].get<std::string>(), "dipole case");
  }
  if (expect.contains("m")) v.expect(r.dipole && r.dipole->m == count("m"), "dipole m");
  if (expect.contains("theta")) {
    v.expect(r.dipole && std::abs(r.dipole->theta - expect["theta"].get<double>()) <= 1e-9, "dipole theta");
  }
}

int selfcheck(const std::string& data_dir, const CommonArgs& args) {
  const fs::path dir = fs::path(data_dir) / "corpus";
  const Tolerance tol = args.tol();
  const Json manifest = [&] {
    const std::string text = read_file(dir / "manifest.json");
    try {
      return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError((dir / "manifest.json").string(), e.what());
    }
  }();
  bool all = true;
  for (const auto& entry : manifest.at("entries")) {
    const std::string file = entry.at("file").get<std::string>();
    const Json& expect = entry.at("expect");
    Verdict v;
    if (expect.contains("exit")) {
      try {
        parse_operator(dir / file, tol);
        v.expect(false, "expected an input error");
      } catch (const InputError& e) {
        v.notes.push_back(std::string("rejected: ") + e.what());
      }
    } else {
      const ParsedOperator in = parse_operator(dir / file, tol);
      AnalysisOptions o;
      o.tol = tol;
      o.seed = args.seed;
      const AnalysisReport r = run_analysis(in, o);
      v.expect(r.passed(), "report checks");
      for (const auto& c : r.checks) {
        if (!c.passed) v.notes.push_back("failed check " + c.name);
      }
      v.expect(dump_report(r) == dump_report(run_analysis(in, o)), "deterministic report");
      check_expectations(expect, r, dir, tol, in, v);
    }
    all = all && v.ok;
    std::cout << (v.ok ? "PASS " : "FAIL ") << file;
    for (const auto& n : v.notes) std::cout << "  [" << n << "]";
    std::cout << "\n";
  }
  std::cout << (all ? "selfcheck: pass" : "selfcheck: FAIL") << "\n";
  return all ? kExitPass : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Environment algebra analysis of bipartite unitaries and Hamiltonians"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    void (*enable)(AnalysisOptions&);
  };
  const std::vector<Sub> subs = {
      {"analyze", "run the full pipeline",
       [](AnalysisOptions&) {}},
      {"blocks", "system blocks and their reconstruction",
       [](AnalysisOptions& o) { o.blocks = true; }},
      {"algebra", "environment algebra, commutant, center, structure",
       [](AnalysisOptions& o) { o.blocks = o.algebra = true; }},
      {"right-action", "environment right-action algebra",
       [](AnalysisOptions& o) { o.right_action = true; }},
      {"split", "classical/quantum split of the environment",
       [](AnalysisOptions& o) { o.split = true; }},
      {"classical-form", "commutative normal forms and the equivalent representative",
       [](AnalysisOptions& o) { o.split = o.forms = true; }},
      {"cpmap", "channel spectral cross-checks and entropy sampling",
       [](AnalysisOptions& o) { o.cpmap = o.entropy = true; }},
      {"dipole", "dipole Hamiltonian classification",
       [](AnalysisOptions& o) { o.dipole = o.algebra = true; }},
  };

  std::vector<CommonArgs> args(subs.size());
  std::vector<CLI::App*> apps;
  for (std::size_t k = 0; k < subs.size(); ++k) {
    apps.push_back(app.add_subcommand(subs[k].name, subs[k].help));
    add_common(apps.back(), args[k]);
  }

  CommonArgs st_args;
  std::vector<std::string> psi_specs;
  CLI::App* st = app.add_subcommand("stinespring", "Stinespring minimality and cyclicity of psi");
  add_common(st, st_args);
  st->add_option("--psi", psi_specs, "basis index or vector file")->required();

  CommonArgs sc_args;
  std::string data_dir = ENVALG_DATA_DIR;
  CLI::App* sc = app.add_subcommand("selfcheck", "run the shipped example corpus");
  add_common(sc, sc_args, false);
  sc->add_option("--data-dir", data_dir, "directory containing corpus/manifest.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (sc->parsed()) return selfcheck(data_dir, sc_args);

    if (st->parsed()) {
      const ParsedOperator in = parse_operator(st_args.input, st_args.tol());
      AnalysisOptions o = AnalysisOptions::none();
      o.tol = st_args.tol();
      o.seed = st_args.seed;
      o.stinespring = true;
      for (const auto& s : psi_specs) o.psi.push_back(resolve_psi(s, in.op.env_dim()));
      return finish(run_analysis(in, o), st_args);
    }

    for (std::size_t k = 0; k < subs.size(); ++k) {
      if (!apps[k]->parsed()) continue;
      const ParsedOperator in = parse_operator(args[k].input, args[k].tol());
      AnalysisOptions o = std::string(subs[k].name) == "analyze" ? AnalysisOptions{} : AnalysisOptions::none();
      o.tol = args[k].tol();
      o.seed = args[k].seed;
      subs[k].enable(o);
      if (std::string(subs[k].name) == "dipole" && !in.dipole) {
        throw InputError(args[k].input + ": dipole subcommand needs a dipole-kind file");
      }
      return finish(run_analysis(in, o), args[k]);
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DimensionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return kExitCheck;
  }
  return kExitInput;
}
