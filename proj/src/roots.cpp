#include "unibound/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace unibound {

std::optional<double> larger_quadratic_root(double a, double b, double c) {
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    if (disc < -kRootTolerance * b * b) return std::nullopt;
    disc = 0.0;
  }
  const double s = std::sqrt(disc);
  // The larger root for b < 0 without cancellation; fall back to the
  // conjugate form when b > 0.
  if (b <= 0.0) return (-b + s) / (2.0 * a);
  const double q = -0.5 * (b + s);
  return c / q;
}

std::optional<double> solve_quadratic_bound(int k, double S1, double S2, double C) {
  return larger_quadratic_root(static_cast<double>(k), -(2.0 + C) * S1, (1.0 + C) * S2);
}

RootResult solve_monotone_bound(const std::function<double(double)>& G, double z_low,
                                double target, double tol) {
  RootResult out;
  const double eps = 1e-9;
  double span = std::max(std::abs(z_low), 1.0) * eps;
  double lo = z_low + span;
  int it = 0;
  // Left end must have G above target; shrink toward z_low if not.
  while (!(G(lo) > target) && it < kMaxDoublings) {
    span *= 0.5;
    lo = z_low + span;
    ++it;
    if (lo == z_low) break;
  }
  if (!(G(lo) > target)) {
    out.root = lo;
    out.iterations = it;
    out.residual = std::abs(G(lo) - target);
    out.valid = out.residual <= tol * std::abs(target);
    if (!out.valid) out.note = "left bracket not found";
    return out;
  }
  double width = std::max(std::abs(z_low), 1.0);
  double hi = z_low + width;
  int doublings = 0;
  while (!(G(hi) < target)) {
    if (++doublings > kMaxDoublings) {
      out.root = hi;
      out.iterations = it + doublings;
      out.note = "bracket failure";
      return out;
    }
    width *= 2.0;
    hi = z_low + width;
  }
  it += doublings;
  double mid = 0.5 * (lo + hi), gm = G(mid);
  for (int i = 0; i < kMaxBisections; ++i) {
    ++it;
    mid = 0.5 * (lo + hi);
    gm = G(mid);
    if (std::abs(gm - target) <= tol * std::abs(target)) break;
    if (gm > target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) break;
  }
  out.root = mid;
  out.iterations = it;
  out.residual = std::abs(gm - target);
  out.valid = true;
  if (out.residual > tol * std::abs(target)) out.note = "bracket exhausted in floating point";
  return out;
}

RootResult solve_largest_root_bound(const std::function<Feasibility(double)>& H, double z_low,
                                    double z_hint, double tol) {
  RootResult out;
  auto feasible = [&](double z) { return H(z).value <= 0.0; };
  auto feasible_at_end = [&](double z) {
    const auto h = H(z);
    return h.value <= tol * h.scale;
  };
  const double start = z_low * (1.0 + 1e-9);
  double cap = std::max(2.0 * z_hint, 2.0 * start);
  int it = 0;
  while (feasible(cap)) {
    if (++it > kMaxDoublings) {
      out.root = cap;
      out.iterations = it;
      out.note = "feasible set unbounded on scan";
      return out;
    }
    cap *= 2.0;
  }

  const double decades = std::log10(cap / start);
  const int points = std::max(2, static_cast<int>(std::ceil(decades * kScanPointsPerDecade)) + 1);
  const double ratio = std::pow(cap / start, 1.0 / (points - 1));
  std::vector<double> grid(points);
  grid[0] = start;
  for (int i = 1; i < points; ++i) grid[i] = grid[i - 1] * ratio;
  grid[points - 1] = cap;

  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (int i = points - 2; i >= 0; --i) {
    ++it;
    if (feasible(grid[i])) {
      lo = grid[i];
      hi = grid[i + 1];
      found = true;
      break;
    }
  }
  if (!found) {
    if (!feasible_at_end(z_low)) {
      out.root = z_low;
      out.iterations = it;
      out.residual = H(z_low).value;
      out.note = "empty feasible set";
      return out;
    }
    // Only the left end passes (within round-off); look for genuinely
    // feasible points just above it.
    lo = z_low;
    hi = start;
    for (int i = 0; i < kMaxBisections && hi - lo > tol * hi; ++i) {
      ++it;
      const double mid = 0.5 * (lo + hi);
      if (feasible(mid))
        lo = mid;
      else
        hi = mid;
    }
    if (lo == z_low) {
      out.root = z_low;
      out.iterations = it;
      out.residual = std::abs(H(z_low).value);
      out.note = "feasible set reduces to the left end";
      return out;
    }
  } else {
    for (int i = 0; i < kMaxBisections && hi - lo > tol * hi; ++i) {
      ++it;
      const double mid = 0.5 * (lo + hi);
      if (feasible(mid))
        lo = mid;
      else
        hi = mid;
    }
  }
  out.root = lo;
  out.iterations = it;
  const auto h = H(lo);
  out.residual = h.scale > 0.0 ? std::abs(h.value) / h.scale : std::abs(h.value);
  out.valid = true;
  return out;
}

}  // namespace unibound
