// Python module envalg._core: thin wrappers that take numpy complex arrays
// plus the (N, d) split and return plain Python containers.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "envalg/analysis.hpp"
#include "envalg/channel.hpp"
#include "envalg/corpus.hpp"
#include "envalg/dipole.hpp"
#include "envalg/environment.hpp"
#include "envalg/errors.hpp"
#include "envalg/io.hpp"
#include "envalg/report.hpp"
#include "envalg/right_action.hpp"

namespace py = pybind11;
using namespace envalg;

namespace {

Tolerance make_tol(double rank_rel, double eq_abs) {
  Tolerance t{rank_rel, eq_abs};
  t.validate();
  return t;
}

BipartiteOperator unitary(const ComplexMatrix& m, std::size_t n, std::size_t d, const Tolerance& tol) {
  return BipartiteOperator(n, d, m, OperatorKind::unitary, tol);
}

py::dict algebra_dict(const StarAlgebra& a, const Tolerance& tol) {
  py::dict out;
  out["dim"] = a.dim();
  out["commutative"] = is_commutative(a, tol);
  out["basis"] = a.basis();
  return out;
}

py::dict form_dict(const ClassicalForm& f) {
  py::dict out;
  out["unitaries"] = f.unitaries;
  out["psi"] = f.psi;
  out["phi"] = f.phi ? py::cast(*f.phi) : py::none();
  out["reconstruction_residual"] = f.reconstruction_residual;
  return out;
}

py::dict operator_dict(const BipartiteOperator& u) {
  py::dict out;
  out["matrix"] = u.matrix();
  out["sys_dim"] = u.sys_dim();
  out["env_dim"] = u.env_dim();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Environment algebras of bipartite unitaries";
  m.attr("DEFAULT_SEED") = kDefaultSeed;

  static py::exception<Error> error(m, "Error");
  static py::exception<InputError> input_error(m, "InputError", error.ptr());
  static py::exception<CheckFailure> check_failure(m, "CheckFailure", error.ptr());
  static py::exception<NumericalFault> numerical_fault(m, "NumericalFault", error.ptr());
  static py::exception<DimensionError> dimension_error(m, "DimensionError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      PyErr_SetString(input_error.ptr(), e.what());
    } catch (const CheckFailure& e) {
      PyErr_SetString(check_failure.ptr(), e.what());
    } catch (const NumericalFault& e) {
      PyErr_SetString(numerical_fault.ptr(), e.what());
    } catch (const DimensionError& e) {
      PyErr_SetString(dimension_error.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  const auto tr = py::arg("tol_rank") = 1e-10;
  const auto te = py::arg("tol_eq") = 1e-9;

  m.def(
      "environment_algebra",
      [](const ComplexMatrix& u, std::size_t n, std::size_t d, double r, double e) {
        const Tolerance tol = make_tol(r, e);
        return algebra_dict(environment_algebra(BipartiteOperator(n, d, u, OperatorKind::general, tol), tol), tol);
      },
      py::arg("u"), py::arg("sys_dim"), py::arg("env_dim"), tr, te);

  m.def(
      "right_action_algebra",
      [](const ComplexMatrix& u, std::size_t n, std::size_t d, double r, double e) {
        const Tolerance tol = make_tol(r, e);
        return algebra_dict(right_action_algebra(unitary(u, n, d, tol), tol).alg, tol);
      },
      py::arg("u"), py::arg("sys_dim"), py::arg("env_dim"), tr, te);

  m.def(
      "classical_quantum_split",
      [](const ComplexMatrix& u, std::size_t n, std::size_t d, double r, double e) {
        const Tolerance tol = make_tol(r, e);
        const EnvironmentSplit s = classical_quantum_split(unitary(u, n, d, tol), tol);
        py::dict out;
        out["kc_basis"] = s.kc_basis;
        out["kq_basis"] = s.kq_basis;
        out["p_c"] = s.p_c.matrix;
        out["u_c"] = s.u_c ? py::cast(s.u_c->matrix()) : py::none();
        out["u_q"] = s.u_q ? py::cast(s.u_q->matrix()) : py::none();
        return out;
      },
      py::arg("u"), py::arg("sys_dim"), py::arg("env_dim"), tr, te);

  m.def(
      "commutative_form",
      [](const ComplexMatrix& u, std::size_t n, std::size_t d, double r, double e) {
        const Tolerance tol = make_tol(r, e);
        return form_dict(commutative_form(unitary(u, n, d, tol), tol));
      },
      py::arg("u"), py::arg("sys_dim"), py::arg("env_dim"), tr, te);

  m.def(
      "right_commutative_form",
      [](const ComplexMatrix& u, std::size_t n, std::size_t d, double r, double e) {
        const Tolerance tol = make_tol(r, e);
        return form_dict(right_commutative_form(unitary(u, n, d, tol), tol));
      },
      py::arg("u"), py::arg("sys_dim"), py::arg("env_dim"), tr, te);

  m.def(
      "same_action",
      [](const ComplexMatrix& u, const ComplexMatrix& v, std::size_t n, std::size_t d, double r,
         double e) -> std::optional<ComplexMatrix> {
        const Tolerance tol = make_tol(r, e);
        const auto w = same_action(unitary(u, n, d, tol), unitary(v, n, d, tol), tol);
        if (!w) return std::nullopt;
        return w->w;
      },
      py::arg("u"), py::arg("v"), py::arg("sys_dim"), py::arg("env_dim"), tr, te);

  m.def(
      "build_equivalent_v",
      [](const ComplexMatrix& u, std::size_t n, std::size_t d, double r, double e) {
        const Tolerance tol = make_tol(r, e);
        const EquivalentRepresentative rep = build_equivalent_v(unitary(u, n, d, tol), tol);
        py::dict out;
        out["v"] = rep.witness.v.matrix();
        out["w"] = rep.witness.w;
        out["verified"] = rep.verified;
        out["algebra_residual"] = rep.algebra_residual;
        return out;
      },
      py::arg("u"), py::arg("sys_dim"), py::arg("env_dim"), tr, te);

  m.def(
      "spectral_dims",
      [](const ComplexMatrix& u, std::size_t n, std::size_t d, double r, double e) {
        const Tolerance tol = make_tol(r, e);
        const BipartiteOperator op = unitary(u, n, d, tol);
        return py::make_tuple(fixed_space(op, tol).space.dim(), singular_one_space(op, tol).space.dim());
      },
      py::arg("u"), py::arg("sys_dim"), py::arg("env_dim"), tr, te);

  m.def(
      "entropy_check",
      [](const ComplexMatrix& u, std::size_t n, std::size_t d, const ComplexMatrix& omega, double slack) {
        const EntropyCheck c = entropy_check(unitary(u, n, d, {}), DensityMatrix(omega), slack);
        py::dict out;
        out["s_before"] = c.s_before;
        out["s_after"] = c.s_after;
        out["equality_residual"] = c.equality_residual;
        out["equal"] = c.equal;
        return out;
      },
      py::arg("u"), py::arg("sys_dim"), py::arg("env_dim"), py::arg("omega"), py::arg("slack") = 1e-10);

  m.def(
      "stinespring_minimal",
      [](const ComplexMatrix& u, std::size_t n, std::size_t d, const ComplexVector& psi) {
        const StinespringWitness w = stinespring_minimal(unitary(u, n, d, {}), psi);
        return py::make_tuple(w.minimal, w.cyclic);
      },
      py::arg("u"), py::arg("sys_dim"), py::arg("env_dim"), py::arg("psi"));

  m.def(
      "dipole_classify",
      [](const ComplexMatrix& h_s, const std::vector<ComplexMatrix>& couplings) {
        DipoleModel model;
        model.h_s = h_s;
        model.couplings = couplings;
        const ClassificationResult c = dipole_classify(model);
        py::dict out;
        out["case"] = c.case_tag == DipoleCase::commutative_rank_one ? "commutative-rank-one" : "block-split";
        out["m"] = c.reduction.m;
        out["theta"] = c.theta;
        out["algebra_dim"] = c.algebra.dim();
        out["algebra_residual"] = c.algebra_residual;
        return out;
      },
      py::arg("h_s"), py::arg("couplings"));

  m.def(
      "analyze_file",
      [](const std::string& path, std::uint64_t seed, double r, double e) {
        AnalysisOptions o;
        o.tol = make_tol(r, e);
        o.seed = seed;
        return dump_report(run_analysis(parse_operator(path, o.tol), o));
      },
      py::arg("path"), py::arg("seed") = kDefaultSeed, tr, te,
      "Full pipeline on an operator file; returns the JSON report text.");

  m.def("spontaneous_emission", [](double theta) { return operator_dict(spontaneous_emission(theta)); });
  m.def("block_example", [](double a, double b, double theta) { return operator_dict(block_example(a, b, theta)); });
  m.def("swapped_pair", [](const ComplexMatrix& u1, const ComplexMatrix& u2) {
    const UnitaryPair p = swapped_pair(u1, u2);
    return py::make_tuple(operator_dict(p.u), operator_dict(p.v));
  });
}
