#pragma once

// Reference implementations for tests. Written with plain loops and
// elimination so they share no code path with the library's Eigen-based
// decompositions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// (i, j) system block of an (n d) x (n d) matrix, computed elementwise.
inline Mat sys_block(const Mat& m, std::size_t n, std::size_t d, std::size_t i, std::size_t j) {
  (void)n;
  Mat out(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) out(a, b) = m(i * d + a, j * d + b);
  return out;
}

inline Mat trace_env(const Mat& m, std::size_t n, std::size_t d) {
  Mat out = Mat::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t a = 0; a < d; ++a) out(i, j) += m(i * d + a, j * d + a);
  return out;
}

inline Mat trace_sys(const Mat& m, std::size_t n, std::size_t d) {
  Mat out = Mat::Zero(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t i = 0; i < n; ++i) out(a, b) += m(i * d + a, i * d + b);
  return out;
}

/// Rank by Gaussian elimination with full pivoting; pivots below
/// max(rel * largest entry, 1e-12) count as zero.
inline std::size_t gauss_rank(Mat a, double rel = 1e-9) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  double scale = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) scale = std::max(scale, std::abs(a(i, j)));
  const double floor = std::max(rel * scale, 1e-12);
  std::size_t rank = 0;
  for (Eigen::Index step = 0; step < std::min(rows, cols); ++step) {
    Eigen::Index pr = step;
    Eigen::Index pc = step;
    double best = 0.0;
    for (Eigen::Index i = step; i < rows; ++i)
      for (Eigen::Index j = step; j < cols; ++j)
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          pr = i;
          pc = j;
        }
    if (best <= floor) break;
    a.row(step).swap(a.row(pr));
    a.col(step).swap(a.col(pc));
    for (Eigen::Index i = step + 1; i < rows; ++i) {
      const Complex f = a(i, step) / a(step, step);
      for (Eigen::Index j = step; j < cols; ++j) a(i, j) -= f * a(step, j);
    }
    ++rank;
  }
  return rank;
}

inline Vec vec(const Mat& x) {
  Vec v(x.size());
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) v(j * x.rows() + i) = x(i, j);
  return v;
}

inline Mat columns(const std::vector<Mat>& mats) {
  if (mats.empty()) return Mat(0, 0);
  Mat out(mats[0].size(), static_cast<Eigen::Index>(mats.size()));
  for (std::size_t k = 0; k < mats.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = vec(mats[k]);
  return out;
}

/// Dimension of the unital *-algebra generated by `gens`, by closing the set
/// of words under multiplication until the rank stops growing.
inline std::size_t algebra_dim(const std::vector<Mat>& gens, std::size_t d, double rel = 1e-9) {
  std::vector<Mat> basic{Mat::Identity(d, d)};
  for (const auto& g : gens) {
    basic.push_back(g);
    basic.push_back(g.adjoint());
  }
  std::vector<Mat> words = basic;
  std::size_t rank = gauss_rank(columns(words), rel);
  while (true) {
    std::vector<Mat> next = words;
    for (const auto& w : words)
      for (const auto& b : basic) next.push_back(w * b);
    // Keep a spanning subset so the word list stays small.
    std::vector<Mat> kept;
    std::size_t r = 0;
    for (const auto& w : next) {
      kept.push_back(w);
      const std::size_t nr = gauss_rank(columns(kept), rel);
      if (nr == r) {
        kept.pop_back();
      } else {
        r = nr;
      }
    }
    if (r == rank) return rank;
    rank = r;
    words = kept;
  }
}

/// dim {Y : Y M = M Y for every M in mats}, as d^2 - rank of the stacked
/// commutator constraints.
inline std::size_t commutant_dim(const std::vector<Mat>& mats, std::size_t d, double rel = 1e-9) {
  Mat stack(static_cast<Eigen::Index>(mats.size() * d * d), static_cast<Eigen::Index>(d * d));
  for (std::size_t k = 0; k < mats.size(); ++k) {
    for (std::size_t c = 0; c < d * d; ++c) {
      Mat e = Mat::Zero(d, d);
      e(c % d, c / d) = 1.0;
      const Mat comm = e * mats[k] - mats[k] * e;
      stack.block(static_cast<Eigen::Index>(k * d * d), c, d * d, 1) = vec(comm);
    }
  }
  return d * d - gauss_rank(stack, rel);
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi on its real 2n x 2n
/// embedding; each eigenvalue of the embedding appears twice.
inline std::vector<double> hermitian_eigenvalues(const Mat& h) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd a(2 * n, 2 * n);
  a << h.real(), -h.imag(), h.imag(), h.real();
  const Eigen::Index m = 2 * n;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = p + 1; q < m; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index q = p + 1; q < m; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < m; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < m; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev;
  for (Eigen::Index k = 0; k < m; ++k) ev.push_back(a(k, k));
  std::sort(ev.begin(), ev.end());
  std::vector<double> out;
  for (std::size_t k = 0; k < ev.size(); k += 2) out.push_back(0.5 * (ev[k] + ev[k + 1]));
  return out;
}

inline double von_neumann(const Mat& rho) {
  double s = 0.0;
  for (double p : hermitian_eigenvalues(rho))
    if (p > 1e-15) s -= p * std::log(p);
  return s;
}

/// Gram-Schmidt (twice) of the columns of a, dropping columns whose residual
/// norm falls below tol.
inline Mat gram_schmidt(const Mat& a, double tol = 1e-9) {
  std::vector<Vec> out;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Vec v = a.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : out) v -= q * q.dot(v);
    if (v.norm() > tol) out.push_back(v / v.norm());
  }
  Mat q(a.rows(), static_cast<Eigen::Index>(out.size()));
  for (std::size_t k = 0; k < out.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = out[k];
  return q;
}

}  // namespace oracle
