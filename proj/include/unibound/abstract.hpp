#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unibound/common.hpp"
#include "unibound/couples.hpp"
#include "unibound/eigensolve.hpp"

namespace unibound {

/// XY - YX.
template <typename DX, typename DY>
Matrix<typename DX::Scalar> commutator(const Eigen::MatrixBase<DX>& X, const Eigen::MatrixBase<DY>& Y) {
  if (X.rows() != X.cols() || Y.rows() != Y.cols() || X.rows() != Y.rows())
    throw Error(Errc::shape, "commutator needs conformable square matrices");
  return X * Y - Y * X;
}

/// Hermitian A, Hermitian B_p, anti-self-adjoint T_p (T* = -T).
template <typename Scalar>
struct OperatorTriple {
  Matrix<Scalar> A;
  std::vector<Matrix<Scalar>> Bs;
  std::vector<Matrix<Scalar>> Ts;

  Index dim() const noexcept { return A.rows(); }
  Index nops() const noexcept { return static_cast<Index>(Bs.size()); }

  /// Shape and symmetry checks (1e-13 relative).
  void validate() const {
    const Index d = A.rows();
    if (A.cols() != d || d < 1) throw Error(Errc::shape, "A must be square");
    if (Bs.size() != Ts.size()) throw Error(Errc::shape, "need as many T_p as B_p");
    auto check = [d](const Matrix<Scalar>& M, double sign, const char* what) {
      if (M.rows() != d || M.cols() != d) throw Error(Errc::shape, std::string(what) + " has wrong shape");
      const Matrix<Scalar> Ms = M.adjoint();
      if ((M - Scalar(sign) * Ms).norm() > 1e-13 * std::max(1.0, M.norm()))
        throw Error(Errc::not_symmetric, std::string(what) + " violates its symmetry");
    };
    check(A, 1.0, "A");
    for (const auto& B : Bs) check(B, 1.0, "B_p");
    for (const auto& T : Ts) check(T, -1.0, "T_p");
  }
};

using ComplexTriple = OperatorTriple<Complex>;

/// Per-eigenvector sums over p of the quantities entering the abstract
/// inequality. `commutator_term` is sum_p <[T_p,B_p]u_i,u_i>, `quad` is
/// sum_p <[A,B_p]u_i,B_p u_i>, `tnorm` is sum_p ||T_p u_i||^2, `scale` is
/// sum_p ||A|| ||B_p u_i||^2.
struct TripleSpectrum {
  RealVector lambda;
  RealVector commutator_term;
  RealVector quad;
  RealVector tnorm;
  RealVector scale;
  double norm_A = 0.0;
  /// Corollary data only: max over i, p of
  /// |<[A,B]u,Bu> + 1/2 <[[A,B],B]u,u>| and the imaginary parts dropped.
  double identity_residual = 0.0;
  double identity_scale = 0.0;
  bool corollary = false;
};

namespace detail {

template <typename Scalar>
TripleSpectrum analyze(const Matrix<Scalar>& A, const std::vector<Matrix<Scalar>>& Bs,
                       const std::vector<Matrix<Scalar>>* Ts) {
  auto eig = dense_symmetric_eig(A, true);
  const Matrix<Scalar>& U = *eig.eigenvectors;
  const Index d = A.rows();
  TripleSpectrum s;
  s.lambda = eig.eigenvalues;
  s.commutator_term = RealVector::Zero(d);
  s.quad = RealVector::Zero(d);
  s.tnorm = RealVector::Zero(d);
  s.scale = RealVector::Zero(d);
  s.norm_A = s.lambda.size() ? std::max(std::abs(s.lambda(0)), std::abs(s.lambda(d - 1))) : 0.0;
  s.corollary = Ts == nullptr;
  for (std::size_t p = 0; p < Bs.size(); ++p) {
    const Matrix<Scalar>& B = Bs[p];
    const Matrix<Scalar> AB = commutator(A, B);
    const Matrix<Scalar> T = Ts ? (*Ts)[p] : AB;
    const Matrix<Scalar> TB = commutator(T, B);
    const Matrix<Scalar> ABB = commutator(AB, B);
    for (Index i = 0; i < d; ++i) {
      const auto u = U.col(i);
      const Vector<Scalar> Bu = B * u;
      const Vector<Scalar> Tu = T * u;
      const Scalar q = Bu.dot(AB * u);  // <[A,B]u, Bu>
      s.commutator_term(i) += Eigen::numext::real(u.dot(TB * u));
      s.quad(i) += Eigen::numext::real(q);
      s.tnorm(i) += Tu.squaredNorm();
      s.scale(i) += s.norm_A * Bu.squaredNorm();
      if (!Ts) {
        const Scalar other = u.dot(ABB * u);
        s.identity_residual = std::max(
            {s.identity_residual, std::abs(q + Scalar(0.5) * other), std::abs(Eigen::numext::imag(q))});
        s.identity_scale = std::max(s.identity_scale, s.norm_A * Bu.squaredNorm());
      }
    }
  }
  return s;
}

}  // namespace detail

template <typename Scalar>
TripleSpectrum analyze_triple(const OperatorTriple<Scalar>& t) {
  t.validate();
  return detail::analyze(t.A, t.Bs, &t.Ts);
}

/// Corollary data: T_p = [A, B_p].
template <typename Scalar>
TripleSpectrum analyze_corollary(const Matrix<Scalar>& A, const std::vector<Matrix<Scalar>>& Bs) {
  OperatorTriple<Scalar> t{A, Bs, Bs};
  for (auto& T : t.Ts) T.setZero();
  t.validate();
  return detail::analyze<Scalar>(A, Bs, nullptr);
}

enum class TheoremStatus { pass, fail, hypothesis_not_met };

std::string_view to_string(TheoremStatus s) noexcept;

struct TheoremReport {
  Index k = 0;
  double z = 0.0;  // lambda_{k+1} unless overridden
  double lhs = 0.0;
  double rhs = 0.0;
  double quad_coeff = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  double quad_scale = 0.0;
  double identity_residual = 0.0;  // corollary only
  bool pass = false;
  TheoremStatus status = TheoremStatus::fail;
};

inline constexpr double kAbstractTolerance = 1e-9;

/// Evaluates the inequality for lambda_1..lambda_k with the couple rebound
/// to threshold z (default lambda_{k+1}; any z in (lambda_k, lambda_{k+1}]
/// is allowed). For corollary data the right side carries no factor 4 and
/// the left side is (sum f <[A,B]u,Bu>)^2.
/// Throws Errc::hypothesis when lambda_{k+1} - lambda_k <= 1e-12 max(1, ||A||),
/// Errc::membership when the couple fails on lambda_1..lambda_k.
TheoremReport evaluate_theorem(const TripleSpectrum& s, Index k, const FunctionCouple& couple,
                               std::optional<double> z = std::nullopt);

template <typename Scalar>
TheoremReport verify_theorem(const OperatorTriple<Scalar>& t, Index k, const FunctionCouple& couple,
                             std::optional<double> z = std::nullopt) {
  return evaluate_theorem(analyze_triple(t), k, couple, z);
}

template <typename Scalar>
TheoremReport verify_corollary(const Matrix<Scalar>& A, const std::vector<Matrix<Scalar>>& Bs, Index k,
                               const FunctionCouple& couple, std::optional<double> z = std::nullopt) {
  return evaluate_theorem(analyze_corollary(A, Bs), k, couple, z);
}

/// <Q^q u,u>^{r/q} <u,u>^{1-r/q} - <Q^r u,u>; powers by repeated products.
template <typename DQ, typename DU>
double moment_inequality_check(const Eigen::MatrixBase<DQ>& Q_in, const Eigen::MatrixBase<DU>& u_in,
                               int r, int q) {
  using Scalar = typename DQ::Scalar;
  const Matrix<Scalar> Q = Q_in;
  const Vector<Scalar> u = u_in;
  if (Q.rows() != Q.cols() || Q.rows() != u.size()) throw Error(Errc::shape, "Q and u do not conform");
  if (r < 0 || q < r) throw Error(Errc::domain, "need 0 <= r <= q");
  if (std::abs(u.norm() - 1.0) > 1e-12) throw Error(Errc::domain, "u must be a unit vector");
  const auto eig = dense_symmetric_eig(Q, false);
  const double norm = eig.eigenvalues.size() ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  if (eig.eigenvalues.size() && eig.eigenvalues(0) < -1e-12 * norm)
    throw Error(Errc::not_psd, "Q is not positive semidefinite");
  if (q == 0) return 0.0;
  Vector<Scalar> w = u;
  double mr = 0.0, mq = 0.0;
  if (r == 0) mr = u.squaredNorm();
  for (int j = 1; j <= q; ++j) {
    w = Q * w;
    if (j == r) mr = Eigen::numext::real(u.dot(w));
  }
  mq = std::max(0.0, Eigen::numext::real(u.dot(w)));
  const double ratio = static_cast<double>(r) / q;
  return std::pow(mq, ratio) * std::pow(u.squaredNorm(), 1.0 - ratio) - mr;
}

enum class Ensemble { dense_gaussian, sparse, commuting_diagnostic };

std::string_view to_string(Ensemble e) noexcept;
Ensemble parse_ensemble(std::string_view text);

/// Seeded instance: A = (M + M*)/2 + (||M||_F + 1) I, B_p Hermitian parts and
/// T_p = (N - N*)/2 of Gaussian complex matrices. `sparse` zeroes about 70%
/// of the entries; `commuting-diagnostic` makes each B_p a real polynomial in
/// A, so every [A, B_p] and every <[T_p,B_p]u_i,u_i> vanishes.
ComplexTriple random_instance(Index d, Index n, std::uint64_t seed, Ensemble ensemble);

struct AbstractSuiteConfig {
  int trials = 100;
  Index dim = 8;
  Index nops = 3;
  std::vector<CoupleSpec> couples;
  std::uint64_t seed = 0;
  Ensemble ensemble = Ensemble::dense_gaussian;
  bool corollary = false;
  int workers = 1;
  /// k is tested only when lambda_{k+1} - lambda_k > min_gap ||A||.
  double min_gap = 1e-6;
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string couple;
  TheoremReport report;
};

struct AbstractSummary {
  int trials = 0;
  std::size_t checks = 0;
  std::size_t passes = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;
  /// max over checks of (lhs - rhs) / (1 + |rhs|).
  double worst_slack = 0.0;
  double worst_quad = 0.0;  // min quad_coeff / scale
};

/// Runs trial t with seed seed + t for t = 0..trials-1 on `workers` threads.
/// Records come back in trial order regardless of the worker count.
std::vector<TrialRecord> run_abstract_suite(const AbstractSuiteConfig& config, AbstractSummary& summary);

}  // namespace unibound
