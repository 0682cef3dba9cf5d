#include "unibound/eigensolve.hpp"

#include <random>

namespace unibound {

namespace {

/// Orthonormalizes the columns of W against the first `used` columns of V and
/// among themselves (two classical Gram-Schmidt passes). Columns that
/// collapse are replaced by fresh random directions.
void orthonormalize_block(const RealMatrix& V, Index used, RealMatrix& W, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto basis = V.leftCols(used);
  for (Index j = 0; j < W.cols(); ++j) {
    for (int attempt = 0;; ++attempt) {
      auto w = W.col(j);
      const double before = w.norm();
      for (int pass = 0; pass < 2; ++pass) {
        if (used > 0) w -= basis * (basis.transpose() * w);
        if (j > 0) w -= W.leftCols(j) * (W.leftCols(j).transpose() * w);
      }
      const double after = w.norm();
      if (after > 1e-10 * before && after > 0.0) {
        w /= after;
        break;
      }
      if (attempt > 8) throw Error(Errc::precondition, "could not extend the Krylov basis");
      for (Index i = 0; i < w.size(); ++i) w(i) = normal(rng);
    }
  }
}

}  // namespace

double gershgorin_norm(const SparseMatrix& A) {
  RealVector rows = RealVector::Zero(A.rows());
  for (Index k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) rows(it.row()) += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

EigResult<double> smallest_eigs(const SparseMatrix& A, Index m, const SmallestEigsOptions& options) {
  const Index n = A.rows();
  if (A.cols() != n) throw Error(Errc::shape, "operator must be square");
  if (m < 1 || m > n / 4)
    throw Error(Errc::precondition, "requested " + std::to_string(m) + " eigenpairs; need 1 <= m <= dim/4 = " +
                                        std::to_string(n / 4));
  const SparseMatrix At = A.transpose();
  if ((A - At).norm() > 1e-12 * A.norm()) throw Error(Errc::not_symmetric, "operator is not symmetric");

  if (n < options.dense_below) {
    auto full = dense_symmetric_eig(RealMatrix(A), true);
    EigResult<double> out;
    out.method = "dense-fallback";
    out.eigenvalues = full.eigenvalues.head(m);
    out.eigenvectors = full.eigenvectors->leftCols(m);
    out.residuals = full.residuals.head(m);
    out.iterations = full.iterations;
    return out;
  }

  const double normest = gershgorin_norm(A);
  const Index b = std::min<Index>(m + 2, n);
  Index p = std::max<Index>(8 * b, 64);
  p = std::min<Index>(p - p % b, n - n % b);
  const Index keep = std::max<Index>(b, (p / 2) - (p / 2) % b);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;

  RealMatrix V(n, p), AV(n, p);
  Index used = 0;
  RealMatrix block(n, b);
  for (Index i = 0; i < block.size(); ++i) block.data()[i] = normal(rng);
  orthonormalize_block(V, 0, block, rng);

  EigResult<double> out;
  out.method = "block-lanczos";
  for (int restart = 0; restart < options.max_iter; ++restart) {
    out.iterations = restart + 1;
    while (used + block.cols() <= p) {
      const Index c = block.cols();
      V.middleCols(used, c) = block;
      AV.middleCols(used, c) = A * block;
      used += c;
      if (used + b > p) break;
      block = AV.middleCols(used - c, c);
      orthonormalize_block(V, used, block, rng);
    }

    RealMatrix H = V.leftCols(used).transpose() * AV.leftCols(used);
    H = 0.5 * (H + H.transpose()).eval();
    auto ritz = dense_symmetric_eig(H, true);
    const RealMatrix& S = *ritz.eigenvectors;

    const RealMatrix Y = V.leftCols(used) * S.leftCols(m);
    const RealMatrix AY = A * Y;
    RealVector res(m);
    for (Index i = 0; i < m; ++i) res(i) = (AY.col(i) - ritz.eigenvalues(i) * Y.col(i)).norm();

    out.eigenvalues = ritz.eigenvalues.head(m);
    out.eigenvectors = Y;
    out.residuals = res;
    if (res.maxCoeff() <= options.tol * normest) {
      out.converged = true;
      return out;
    }

    // Thick restart: keep the lowest Ritz vectors, extend with residuals.
    const Index q = std::min(keep, used - b);
    const RealMatrix Yq = V.leftCols(used) * S.leftCols(q);
    const RealMatrix AYq = AV.leftCols(used) * S.leftCols(q);
    RealMatrix R = AYq.leftCols(b) - Yq.leftCols(b) * ritz.eigenvalues.head(b).asDiagonal();
    V.leftCols(q) = Yq;
    AV.leftCols(q) = AYq;
    used = q;
    block = R;
    orthonormalize_block(V, used, block, rng);
  }
  out.converged = false;
  return out;
}

}  // namespace unibound
