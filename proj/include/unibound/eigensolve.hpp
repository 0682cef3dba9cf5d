#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "unibound/common.hpp"

namespace unibound {

inline constexpr Index kDenseDimensionCap = 4096;
inline constexpr Index kDenseFallbackDimension = 2048;

template <typename Scalar>
struct EigResult {
  RealVector eigenvalues;  // ascending
  std::optional<Matrix<Scalar>> eigenvectors;
  RealVector residuals;  // ||A v - lambda v|| per pair (empty without vectors)
  std::string method;
  bool converged = true;
  int iterations = 0;
};

namespace detail {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

/// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal matrix
/// (diagonal d, subdiagonal e with e[i] coupling i and i+1). Rotations are
/// accumulated into the columns of Z when given.
inline void tridiagonal_ql(RealVector& d, RealVector& e, RealMatrix* Z, int& iterations) {
  const Index n = d.size();
  if (n == 0) return;
  RealVector sub(n);
  sub.head(n - 1) = e;
  sub(n - 1) = 0.0;
  for (Index l = 0; l < n; ++l) {
    int iter = 0;
    Index m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(sub(m)) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw Error(Errc::precondition, "tridiagonal QL failed to converge");
        ++iterations;
        double g = (d(l + 1) - d(l)) / (2.0 * sub(l));
        double r = std::hypot(g, 1.0);
        g = d(m) - d(l) + sub(l) / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        Index i;
        for (i = m - 1; i >= l; --i) {
          double f = s * sub(i);
          const double b = c * sub(i);
          r = std::hypot(f, g);
          sub(i + 1) = r;
          if (r == 0.0) {
            d(i + 1) -= p;
            sub(m) = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d(i + 1) - p;
          r = (d(i) - g) * s + 2.0 * c * b;
          p = s * r;
          d(i + 1) = g + p;
          g = c * r - b;
          if (Z) {
            auto zi = Z->col(i);
            auto zi1 = Z->col(i + 1);
            for (Index k = 0; k < Z->rows(); ++k) {
              f = zi1(k);
              zi1(k) = s * zi(k) + c * f;
              zi(k) = c * zi(k) - s * f;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d(l) -= p;
        sub(l) = g;
        sub(m) = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

/// Full spectrum of a symmetric (real) or Hermitian (complex) matrix:
/// Householder reduction to tridiagonal form, a diagonal phase change making
/// the off-diagonal real, then implicit QL.
template <typename Derived>
EigResult<typename Derived::Scalar> dense_symmetric_eig(const Eigen::MatrixBase<Derived>& M_in,
                                                        bool want_vectors) {
  using Scalar = typename Derived::Scalar;
  using Mat = Matrix<Scalar>;
  using Vec = Vector<Scalar>;
  const Mat M = M_in;
  const Index n = M.rows();
  if (M.cols() != n) throw Error(Errc::shape, "eigensolver needs a square matrix");
  if (n > kDenseDimensionCap)
    throw Error(Errc::too_large, "dense eigensolver capped at dimension " + std::to_string(kDenseDimensionCap));
  const double norm = M.norm();
  if ((M - M.adjoint()).norm() > 1e-12 * norm)
    throw Error(Errc::not_symmetric, "matrix is not symmetric/Hermitian");

  EigResult<Scalar> out;
  out.method = "dense-householder-ql";
  if (n == 0) {
    out.eigenvalues.resize(0);
    return out;
  }
  Mat A = (M + M.adjoint()) / Scalar(2);
  Mat Q;
  if (want_vectors) Q = Mat::Identity(n, n);

  for (Index k = 0; k + 2 < n; ++k) {
    const Index m = n - k - 1;
    Vec x = A.col(k).tail(m);
    const double xnorm = x.norm();
    if (xnorm == 0.0) continue;
    Scalar phase(1);
    if (std::abs(x(0)) != 0.0) phase = x(0) / std::abs(x(0));
    const Scalar alpha = -phase * xnorm;
    Vec v = x;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    auto B = A.bottomRightCorner(m, m);
    Vec p = B * v;
    const Scalar K = v.dot(p);
    Vec w = p - K * v;
    B -= Scalar(2) * (v * w.adjoint() + w * v.adjoint());
    A.col(k).tail(m).setZero();
    A(k + 1, k) = alpha;
    A.row(k).tail(m).setZero();
    A(k, k + 1) = Eigen::numext::conj(alpha);
    if (want_vectors) {
      auto Qr = Q.rightCols(m);
      Vec t = Qr * v;
      Qr -= Scalar(2) * t * v.adjoint();
    }
  }

  RealVector d(n), e(n > 1 ? n - 1 : 0);
  Vec phase = Vec::Ones(n);
  for (Index i = 0; i < n; ++i) d(i) = Eigen::numext::real(A(i, i));
  for (Index i = 0; i + 1 < n; ++i) {
    const Scalar s = A(i + 1, i);
    const double mag = std::abs(s);
    e(i) = mag;
    phase(i + 1) = mag > 0.0 ? phase(i) * s / mag : phase(i);
  }

  RealMatrix Z;
  if (want_vectors) Z = RealMatrix::Identity(n, n);
  detail::tridiagonal_ql(d, e, want_vectors ? &Z : nullptr, out.iterations);

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return d(a) < d(b); });
  out.eigenvalues.resize(n);
  for (Index i = 0; i < n; ++i) out.eigenvalues(i) = d(order[i]);

  if (want_vectors) {
    Mat Zs(n, n);
    for (Index i = 0; i < n; ++i) Zs.col(i) = Z.col(order[i]).template cast<Scalar>();
    Mat V = Q * (phase.asDiagonal() * Zs);
    out.residuals.resize(n);
    for (Index i = 0; i < n; ++i)
      out.residuals(i) = (M * V.col(i) - out.eigenvalues(i) * V.col(i)).norm();
    out.eigenvectors = std::move(V);
  }
  return out;
}

/// Options for the iterative solver.
struct SmallestEigsOptions {
  double tol = 1e-10;
  int max_iter = 500;  // restarts
  std::uint64_t seed = 12345;
  /// Use the dense solver below this dimension.
  Index dense_below = kDenseFallbackDimension;
};

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Gershgorin bound on the spectral radius.
double gershgorin_norm(const SparseMatrix& A);

/// m smallest eigenpairs of a symmetric matrix. Below options.dense_below
/// the dense solver is used; otherwise a thick-restart block Lanczos with
/// full reorthogonalization and exact residuals. Requires m <= dim / 4.
/// On non-convergence the result carries converged = false.
EigResult<double> smallest_eigs(const SparseMatrix& A, Index m, const SmallestEigsOptions& options = {});

}  // namespace unibound
