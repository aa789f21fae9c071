#include "envalg/channel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "envalg/errors.hpp"
#include "envalg/right_action.hpp"

namespace envalg {

namespace {

// Columns S(|e_k><e_l|) at index l * d + k.
Superoperator tabulate(std::size_t d, SuperoperatorKind kind,
                       const std::function<ComplexMatrix(const ComplexMatrix&)>& map) {
  Superoperator s;
  s.dim = d;
  s.kind = kind;
  const auto dd = static_cast<Eigen::Index>(d * d);
  s.matrix.resize(dd, dd);
  for (std::size_t l = 0; l < d; ++l) {
    for (std::size_t k = 0; k < d; ++k) {
      s.matrix.col(static_cast<Eigen::Index>(l * d + k)) = vec(map(matrix_unit(d, k, l)));
    }
  }
  return s;
}

Superoperator schrodinger(const ComplexMatrix& left, const ComplexMatrix& right, std::size_t n,
                          std::size_t d, SuperoperatorKind kind) {
  const ComplexMatrix id_h = identity(n) / static_cast<double>(n);
  return tabulate(d, kind, [&](const ComplexMatrix& x) {
    const BipartiteOperator evolved(n, d, left * kron(id_h, x) * right);
    return partial_trace_sys(evolved);
  });
}

}  // namespace

ComplexMatrix Superoperator::apply(const ComplexMatrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != dim || static_cast<std::size_t>(x.cols()) != dim) {
    throw DimensionError("superoperator input must be " + std::to_string(dim) + "x" +
                         std::to_string(dim));
  }
  return unvec(matrix * vec(x), dim, dim);
}

Superoperator build_L(const BipartiteOperator& u) {
  return schrodinger(u.matrix(), u.matrix().adjoint(), u.sys_dim(), u.env_dim(), SuperoperatorKind::L);
}

Superoperator build_Lstar(const BipartiteOperator& u) {
  return schrodinger(u.matrix().adjoint(), u.matrix(), u.sys_dim(), u.env_dim(),
                     SuperoperatorKind::Lstar);
}

namespace {

SpectralSpace finish_space(std::size_t d, const ComplexMatrix& raw, double top, const Tolerance& tol,
                           const char* what) {
  SpectralSpace out;
  out.top_singular_value = top;
  out.star_defect = star_defect(d, raw);
  if (out.star_defect > tol.eq_abs) {
    throw NumericalFault(std::string(what) + ": eigenspace is not *-closed (defect " +
                         std::to_string(out.star_defect) + ")");
  }
  out.space = star_repair(d, raw, tol);
  return out;
}

}  // namespace

SpectralSpace fixed_space(const BipartiteOperator& u, const Tolerance& tol) {
  const std::size_t d = u.env_dim();
  const Superoperator l = build_L(u);
  const Superoperator ls = build_Lstar(u);
  const auto dd = l.matrix.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(dd, dd);
  ComplexMatrix stack(2 * dd, dd);
  stack << l.matrix - id, ls.matrix - id;
  const double top = svd(l.matrix).sigma(0);
  return finish_space(d, nullspace(stack, tol), top, tol, "fixed_space");
}

SpectralSpace singular_one_space(const BipartiteOperator& u, const Tolerance& tol) {
  const std::size_t d = u.env_dim();
  const Superoperator l = build_L(u);
  const double top = svd(l.matrix).sigma(0);
  if (top > 1.0 + tol.eq_abs) {
    throw NumericalFault("singular_one_space: L is not a contraction (sigma_max = " +
                         std::to_string(top) + ")");
  }
  const auto dd = l.matrix.rows();
  const ComplexMatrix gram = l.matrix.adjoint() * l.matrix - ComplexMatrix::Identity(dd, dd);
  return finish_space(d, nullspace(gram, tol), top, tol, "singular_one_space");
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, const Tolerance& tol) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw DimensionError("density matrix must be square and non-empty");
  }
  if (!matrix_.allFinite()) throw InputError("density matrix has non-finite entries");
  const double herm = (matrix_ - matrix_.adjoint()).norm();
  if (herm > tol.eq_abs) {
    throw InputError("density matrix is not Hermitian (||w - w^dagger|| = " + std::to_string(herm) + ")");
  }
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > tol.eq_abs) {
    throw InputError("density matrix has trace " + std::to_string(tr));
  }
  const auto eig = eig_hermitian(matrix_, tol);
  if (eig.values(0) < -tol.eq_abs) {
    throw InputError("density matrix has negative eigenvalue " + std::to_string(eig.values(0)));
  }
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint());
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi, const Tolerance& tol) {
  return DensityMatrix(psi * psi.adjoint(), tol);
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t d) {
  return DensityMatrix(identity(d) / static_cast<double>(d));
}

Superoperator heisenberg_channel(const BipartiteOperator& u, const DensityMatrix& omega) {
  const std::size_t n = u.sys_dim();
  const std::size_t d = u.env_dim();
  if (omega.dim() != d) {
    throw DimensionError("heisenberg_channel: state must live on K (dimension " + std::to_string(d) + ")");
  }
  return tabulate(n, SuperoperatorKind::heisenberg_omega, [&](const ComplexMatrix& x) {
    const BipartiteOperator image(n, d, heisenberg_image(u, x));
    return partial_trace_weighted(image, omega.matrix());
  });
}

namespace {

double phi_sum(const RealVector& values, const Tolerance& tol, const char* what) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    double x = values(k);
    if (x < -tol.eq_abs) {
      throw InputError(std::string(what) + ": negative weight " + std::to_string(x));
    }
    if (x <= 0.0) continue;
    s -= x * std::log(x);
  }
  return s;
}

}  // namespace

double entropy(const DensityMatrix& omega, const Tolerance& tol) {
  return phi_sum(eig_hermitian(omega.matrix(), tol).values, tol, "entropy");
}

double shannon(std::span<const double> p, const Tolerance& tol) {
  RealVector v(static_cast<Eigen::Index>(p.size()));
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!std::isfinite(p[k])) throw InputError("shannon: non-finite probability");
    v(static_cast<Eigen::Index>(k)) = p[k];
    total += p[k];
  }
  if (std::abs(total - 1.0) > tol.eq_abs) {
    throw InputError("shannon: probabilities sum to " + std::to_string(total));
  }
  return phi_sum(v, tol, "shannon");
}

EntropyCheck entropy_evaluate(const BipartiteOperator& u, const DensityMatrix& omega, double slack,
                              const Tolerance& tol) {
  const std::size_t n = u.sys_dim();
  EntropyCheck out;
  const ComplexMatrix lw = build_L(u).apply(omega.matrix());
  const DensityMatrix after = [&] {
    try {
      return DensityMatrix(0.5 * (lw + lw.adjoint()), tol);
    } catch (const InputError& e) {
      throw NumericalFault(std::string("entropy_check: L(omega) failed state validation: ") + e.what());
    }
  }();
  out.s_before = entropy(omega, tol);
  out.s_after = entropy(after, tol);
  const ComplexMatrix id_h = identity(n) / static_cast<double>(n);
  const ComplexMatrix joint = u.matrix() * kron(id_h, omega.matrix()) * u.matrix().adjoint();
  out.equality_residual = (joint - kron(id_h, after.matrix())).norm();
  const double delta = out.s_after - out.s_before;
  out.increased = delta >= -slack;
  out.equal = std::abs(delta) <= slack;
  out.equality_condition_holds = out.equality_residual <= std::sqrt(slack);
  return out;
}

EntropyCheck entropy_check(const BipartiteOperator& u, const DensityMatrix& omega, double slack,
                           const Tolerance& tol) {
  const EntropyCheck out = entropy_evaluate(u, omega, slack, tol);
  if (!out.increased) {
    const double delta = out.s_after - out.s_before;
    throw CheckFailure("entropy_check: entropy decreased by " + std::to_string(-delta));
  }
  return out;
}

}  // namespace envalg
