#pragma once

#include <functional>
#include <optional>
#include <string>

namespace unibound {

/// Scalar root-finding kernels used to turn an inequality on lambda_{k+1}
/// into an explicit upper bound.

struct RootResult {
  double root = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool valid = false;
  std::string note;
};

/// Value of a feasibility function together with the magnitude of the terms
/// it was assembled from (used for relative round-off tolerances).
struct Feasibility {
  double value;
  double scale;
};

inline constexpr double kRootTolerance = 1e-12;
inline constexpr int kMaxBisections = 200;
inline constexpr int kMaxDoublings = 200;
inline constexpr int kScanPointsPerDecade = 512;

/// Larger real root of a z^2 + b z + c (a > 0). Discriminants that are
/// negative only by round-off (|disc| <= 1e-12 b^2) are treated as zero.
std::optional<double> larger_quadratic_root(double a, double b, double c);

/// Larger root of k z^2 - (2 + C) S1 z + (1 + C) S2, the rearranged form of
/// sum (z - l_i)^2 <= C sum l_i (z - l_i). Empty on a negative discriminant.
std::optional<double> solve_quadratic_bound(int k, double S1, double S2, double C);

/// Unique z > z_low with G(z) = target, for G strictly decreasing on
/// (z_low, inf) with G(z_low+) = +inf. Brackets by doubling the offset from
/// z_low, then bisects until |G - target| <= tol |target| or the bracket is
/// exhausted in floating point.
RootResult solve_monotone_bound(const std::function<double(double)>& G, double z_low,
                                double target, double tol = kRootTolerance);

/// Supremum of {z >= z_low : H(z) <= 0} for H -> +inf. Scans a geometric grid
/// (kScanPointsPerDecade per decade) from z_low (1 + 1e-9) up to a cap of
/// 2 z_hint (doubled until H(cap) > 0), takes the last sign change and bisects
/// it. Invalid when no z > z_low is feasible; the root is then z_low.
RootResult solve_largest_root_bound(const std::function<Feasibility(double)>& H, double z_low,
                                    double z_hint, double tol = kRootTolerance);

}  // namespace unibound
