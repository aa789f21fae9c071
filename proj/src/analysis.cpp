#include "envalg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "envalg/channel.hpp"
#include "envalg/dipole.hpp"
#include "envalg/environment.hpp"
#include "envalg/right_action.hpp"
#include "envalg/star_algebra.hpp"

namespace envalg {

AnalysisOptions AnalysisOptions::none() {
  AnalysisOptions o;
  o.blocks = o.algebra = o.right_action = o.split = o.forms = false;
  o.cpmap = o.stinespring = o.entropy = o.dipole = false;
  return o;
}

namespace {

void guarded(AnalysisReport& report, const std::string& section, const std::string& module,
             const std::function<void()>& body) {
  try {
    body();
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    report.add_check(section, module, 1.0, 0.0, std::string("error: ") + e.what());
  }
}

AlgebraSummary summarize(const StarAlgebra& alg, const StructureDecomposition& sd, const Tolerance& tol) {
  AlgebraSummary s;
  s.dim = alg.dim();
  s.commutativity_defect = commutativity_defect(alg);
  s.commutative = s.commutativity_defect <= tol.eq_abs;
  s.commutant_dim = commutant(alg, tol).dim();
  s.center_dim = center(alg, tol).dim();
  for (const auto& b : sd.blocks) s.blocks.push_back({b.n, b.m, b.rank()});
  return s;
}

FormSummary summarize(const std::string& target, const ClassicalForm& f) {
  return {target, f.unitaries, f.psi, f.phi, f.reconstruction_residual, f.unitarity_residual};
}

class Session {
 public:
  Session(const ParsedOperator& in, const AnalysisOptions& o) : in_(in), o_(o) {}

  const StarAlgebra& a() {
    if (!a_) a_ = environment_algebra(in_.op, o_.tol);
    return *a_;
  }
  const RightActionAlgebra& ar() {
    if (!ar_) ar_ = right_action_algebra(in_.op, o_.tol);
    return *ar_;
  }

 private:
  const ParsedOperator& in_;
  const AnalysisOptions& o_;
  std::optional<StarAlgebra> a_;
  std::optional<RightActionAlgebra> ar_;
};

}  // namespace

AnalysisReport run_analysis(const ParsedOperator& input, const AnalysisOptions& o) {
  o.tol.validate();
  const Tolerance& tol = o.tol;
  const BipartiteOperator& u = input.op;
  const bool unitary = u.kind() == OperatorKind::unitary;

  AnalysisReport r;
  r.input = {input.name, input.source, to_string(input.kind), u.sys_dim(), u.env_dim(), input.checksum};
  r.tol_rank = tol.rank_rel;
  r.tol_eq = tol.eq_abs;
  r.seed = o.seed;
  Session s(input, o);

  if (unitary) {
    r.add_check("unitarity", "dense-linalg", u.unitarity_residual(), tol.eq_abs);
  } else {
    r.add_check("hermiticity", "dense-linalg", u.hermiticity_residual(), tol.eq_abs);
  }

  if (o.blocks) {
    guarded(r, "block_reconstruction", "environment-algebra", [&] {
      const BlockFamily f = env_blocks(u);
      r.add_check("block_reconstruction", "environment-algebra", (f.reconstruct() - u.matrix()).norm(),
                  tol.eq_abs);
    });
  }

  if (o.algebra) {
    guarded(r, "environment_algebra", "environment-algebra", [&] {
      const StarAlgebra& a = s.a();
      const StructureDecomposition sd = structure_decomposition(a, tol, o.seed);
      r.environment_algebra = summarize(a, sd, tol);
      const StarAlgebra comm = commutant(a, tol);
      r.add_check("environment_algebra_membership", "environment-algebra",
                  block_membership_residual(u, a), kSubspaceThreshold);
      r.add_check("environment_algebra_closure", "star-algebra", a.closure_residual(),
                  kSubspaceThreshold);
      r.add_check("bicommutant", "star-algebra", subspace_residual(a, commutant(comm, tol)),
                  kSubspaceThreshold);
      r.add_check("environment_commutant_direct", "environment-algebra",
                  subspace_residual(environment_commutant_direct(u, tol), comm), kSubspaceThreshold);
      r.add_check("structure_decomposition_A", "star-algebra", structure_residual(a, sd),
                  kSubspaceThreshold);
    });
  }

  if (unitary && o.right_action) {
    guarded(r, "right_action_algebra", "right-action", [&] {
      const RightActionAlgebra& ar = s.ar();
      const StructureDecomposition sd = structure_decomposition(ar.alg, tol, o.seed);
      r.right_action_algebra = summarize(ar.alg, sd, tol);
      r.add_check("right_action_in_environment_algebra", "right-action", ar.containment_residual,
                  kSubspaceThreshold);
      r.add_check("right_action_membership", "right-action", ar.membership_residual,
                  kSubspaceThreshold);
      r.add_check("right_action_commutant_direct", "right-action",
                  subspace_residual(right_action_commutant_direct(u, tol), commutant(ar.alg, tol)),
                  kSubspaceThreshold);
      r.add_check("structure_decomposition_Ar", "star-algebra", structure_residual(ar.alg, sd),
                  kSubspaceThreshold);
    });
  }

  std::optional<EnvironmentSplit> split;
  if (unitary && (o.split || o.forms)) {
    guarded(r, "classical_quantum_split", "environment-algebra", [&] {
      split = classical_quantum_split(u, tol, o.seed);
      if (!o.split) return;
      r.split = SplitSummary{split->kc_dim(), split->kq_dim(), split->kc_basis, split->kq_basis,
                             split->off_block_residual};
      r.add_check("split_invariance", "environment-algebra", split->off_block_residual, tol.eq_abs);
      r.add_check("classical_part_commutative", "environment-algebra",
                  split->classical_commutativity_defect, tol.eq_abs);
      r.add_check("quantum_part_has_no_classical_part", "environment-algebra",
                  static_cast<double>(split->quantum_pc_rank), 0.0);
    });
  }

  if (unitary && o.forms) {
    guarded(r, "commutative_form", "environment-algebra", [&] {
      std::optional<ClassicalForm> form;
      std::string target;
      if (commutativity_defect(s.a()) <= tol.eq_abs) {
        form = commutative_form(u, tol, o.seed);
        target = "U";
      } else if (split && split->u_c) {
        form = commutative_form(*split->u_c, tol, o.seed);
        target = "U_c";
      }
      if (!form) return;
      r.forms.push_back(summarize(target, *form));
      r.add_check("commutative_form_reconstruction", "environment-algebra",
                  form->reconstruction_residual, tol.eq_abs, target);
      r.add_check("commutative_form_unitarity", "environment-algebra", form->unitarity_residual,
                  tol.eq_abs, target);
    });
    guarded(r, "equivalent_representative", "right-action", [&] {
      const EquivalentRepresentative rep = build_equivalent_v(u, tol, o.seed);
      EquivalenceSummary e;
      e.verified = rep.verified;
      e.w = rep.witness.w;
      e.action_residual = rep.witness.action_residual;
      e.algebra_residual = rep.algebra_residual;
      for (const auto& b : rep.blocks) {
        e.blocks.push_back({"block_" + std::to_string(b.index), "right-action", b.membership_residual,
                            10.0 * tol.eq_abs, b.verified,
                            "n=" + std::to_string(b.n) + " m=" + std::to_string(b.m) + ": " + b.detail});
      }
      r.equivalence = e;
      r.add_check("equivalent_v_same_action", "right-action",
                  std::max(rep.witness.action_residual, rep.witness.residual), kSubspaceThreshold);
      r.add_check("equivalent_v_algebra", "right-action", rep.algebra_residual, kSubspaceThreshold);
      r.add_check("equivalent_v_unitarity", "right-action", rep.unitarity_residual, tol.eq_abs);
      double worst_block = 0.0;
      for (const auto& b : rep.blocks) worst_block = std::max(worst_block, b.membership_residual);
      r.add_check("equivalent_v_blocks", "right-action", worst_block, 10.0 * tol.eq_abs);
    });
    guarded(r, "right_commutative_form", "right-action", [&] {
      if (commutativity_defect(s.ar().alg) > tol.eq_abs) return;
      const ClassicalForm form = right_commutative_form(u, tol, o.seed);
      r.forms.push_back(summarize("U (right-action)", form));
      r.add_check("right_commutative_form_reconstruction", "right-action",
                  form.reconstruction_residual, tol.eq_abs);
    });
  }

  if (unitary && o.cpmap) {
    guarded(r, "spectral", "channel-spectral", [&] {
      const Superoperator l = build_L(u);
      const Superoperator ls = build_Lstar(u);
      const std::size_t d = u.env_dim();
      const ComplexMatrix id = identity(d);
      r.add_check("L_adjoint", "channel-spectral", (ls.matrix - l.matrix.adjoint()).norm(), 1e-10);
      r.add_check("L_unital", "channel-spectral", (l.apply(id) - id).norm(), tol.eq_abs);
      const ComplexVector vid = vec(id);
      r.add_check("L_trace_preserving", "channel-spectral",
                  (vid.adjoint() * l.matrix - vid.adjoint()).norm(), tol.eq_abs);
      const SpectralSpace fs = fixed_space(u, tol);
      const SpectralSpace so = singular_one_space(u, tol);
      r.spectral = SpectralSummary{fs.space.dim(), so.space.dim(), so.top_singular_value};
      r.add_check("L_contraction", "channel-spectral", std::max(0.0, so.top_singular_value - 1.0),
                  tol.eq_abs);
      r.add_check("fixed_space_equals_commutant_A", "channel-spectral",
                  subspace_residual(fs.space, commutant(s.a(), tol)), kSubspaceThreshold);
      r.add_check("singular_one_space_equals_commutant_Ar", "channel-spectral",
                  subspace_residual(so.space, commutant(s.ar().alg, tol)), kSubspaceThreshold);
    });
  }

  if (unitary && o.stinespring) {
    guarded(r, "stinespring", "right-action", [&] {
      std::vector<ComplexVector> probes = o.psi;
      if (probes.empty()) {
        for (std::size_t k = 0; k < u.env_dim(); ++k) probes.push_back(basis_vector(u.env_dim(), k));
      }
      std::size_t violations = 0;
      for (const auto& psi : probes) {
        try {
          const StinespringWitness w = stinespring_minimal(u, s.ar(), psi, tol);
          r.stinespring.push_back({w.psi, w.minimal, w.cyclic, w.block_rank, w.algebra_rank});
        } catch (const CheckFailure&) {
          ++violations;
          r.stinespring.push_back({psi, true, false, u.env_dim(), 0});
        }
      }
      r.add_check("stinespring_minimal_implies_cyclic", "right-action", static_cast<double>(violations),
                  0.0);
    });
  }

  if (unitary && o.entropy && o.entropy_samples > 0) {
    guarded(r, "entropy", "channel-spectral", [&] {
      Rng rng(o.seed ^ 0x9e3779b97f4a7c15ULL);
      const std::size_t d = u.env_dim();
      EntropySummary e;
      e.min_increase = std::numeric_limits<double>::infinity();
      double converse = 0.0;
      for (std::size_t k = 0; k < o.entropy_samples; ++k) {
        // Sample states are ours, so they are validated at the default tolerance.
        const DensityMatrix omega = k == 0       ? DensityMatrix::maximally_mixed(d)
                                    : k % 2 == 1 ? DensityMatrix(random_density(d, rng))
                                                 : DensityMatrix::pure(random_unit_vector(d, rng));
        const EntropyCheck c = entropy_evaluate(u, omega, kEntropySlack, tol);
        ++e.samples;
        e.min_increase = std::min(e.min_increase, c.s_after - c.s_before);
        if (c.equal) {
          ++e.equal_cases;
          e.max_equality_residual_when_equal =
              std::max(e.max_equality_residual_when_equal, c.equality_residual);
        }
        if (c.equality_residual <= tol.eq_abs) {
          converse = std::max(converse, std::abs(c.s_after - c.s_before));
        }
      }
      r.entropy = e;
      r.add_check("entropy_monotone", "channel-spectral", std::max(0.0, -e.min_increase), kEntropySlack);
      r.add_check("entropy_equality_condition", "channel-spectral", e.max_equality_residual_when_equal,
                  kEntropyEqualityThreshold);
      r.add_check("entropy_equality_converse", "channel-spectral", converse, kEntropySlack);
    });
  }

  if (o.dipole && input.dipole) {
    guarded(r, "dipole", "environment-algebra", [&] {
      const ClassificationResult c = dipole_classify(*input.dipole, tol);
      DipoleSummary d;
      d.case_tag = c.case_tag == DipoleCase::commutative_rank_one ? "commutative-rank-one" : "block-split";
      d.m = c.reduction.m;
      d.tail_norm = c.reduction.tail_norm;
      d.theta = c.theta;
      d.a = c.a;
      const auto de = static_cast<Eigen::Index>(input.dipole->env_dim());
      d.k1_basis = c.k1_basis.size() ? c.k1_basis : ComplexMatrix(de, 0);
      d.k2_basis = c.k2_basis.cols() ? c.k2_basis : ComplexMatrix(de, 0);
      d.algebra_residual = c.algebra_residual;
      d.reconstruction_residual = c.reconstruction_residual;
      r.dipole = d;
      r.add_check("dipole_reduction_tail", "environment-algebra", c.reduction.tail_norm, 1e-10);
      r.add_check("dipole_algebra", "environment-algebra", c.algebra_residual, kSubspaceThreshold);
      if (c.case_tag == DipoleCase::commutative_rank_one) {
        r.add_check("dipole_normal_form", "environment-algebra", c.reconstruction_residual, tol.eq_abs);
        r.add_check("dipole_commutative", "environment-algebra", c.commutativity_defect, tol.eq_abs);
      }
    });
  }
  return r;
}

}  // namespace envalg
