#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unibound/couples.hpp"
#include "unibound/spectrum.hpp"

namespace unibound {

enum class SolverForm { closed, quadratic, implicit };

std::string_view to_string(SolverForm form) noexcept;

/// Upper bound on lambda_{k+1}. `note` is diagnostic text and is not part
/// of the serialized record.
struct BoundResult {
  std::string name;
  double value = 0.0;
  SolverForm method = SolverForm::closed;
  int iterations = 0;
  double residual = 0.0;
  bool valid = false;
  std::string note;
};

struct BoundDescriptor {
  std::string_view name;
  SolverForm form;
  /// Scaling the prefix by a > 0 scales the bound by a.
  bool homogeneous;
  /// Margin evaluation only; compute_bound rejects it.
  bool verification_only;
  bool (*applies)(Problem problem, int n, int l);
};

/// Immutable registry in a fixed order (the CLI's `--ineq all` order).
std::span<const BoundDescriptor> bound_registry();

/// Throws Errc::lookup for unknown names.
const BoundDescriptor& find_descriptor(std::string_view name);

bool is_applicable(const BoundDescriptor& d, const SpectrumPrefix& prefix) noexcept;

/// Bound on lambda_{k+1} from lambda_1..lambda_k of `prefix`.
BoundResult compute_bound(std::string_view name, const SpectrumPrefix& prefix, std::size_t k);

/// Every applicable, bound-extractable descriptor in registry order.
std::vector<BoundResult> compute_all_bounds(const SpectrumPrefix& prefix, std::size_t k);

struct ChainReport {
  BoundResult yang1, yang2, hp, ppw;
  /// Largest relative excess of an earlier bound over a later one; the chain
  /// holds when it is <= kChainSlack.
  double worst_excess = 0.0;
  bool ordered = false;
};

inline constexpr double kChainSlack = 1e-10;

ChainReport chain_compare(const SpectrumPrefix& prefix, std::size_t k);

/// RHS - LHS of the general polyharmonic inequality with couple (f, g) at
/// lambda_{k+1} = next, using all values of `prefix` as lambda_1..lambda_k.
/// Throws Errc::membership when the couple fails on the prefix values.
double check_general_poly(const SpectrumPrefix& prefix, double next, const FunctionCouple& couple);

/// sqrt(RHS) - sqrt(LHS) of the squared (f = g = (z - x)^2) inequality at
/// z = next; verification-only descriptor "cim-squared-poly".
double cim_squared_margin(const SpectrumPrefix& prefix, double next);

struct MarginRow {
  std::string name;
  bool applicable = false;
  bool valid = false;
  double bound = 0.0;
  /// bound - candidate (for cim-squared-poly: the inequality's own margin).
  double margin = 0.0;
  /// Magnitude the margin is measured against: the candidate, or for
  /// cim-squared-poly the larger square-rooted side.
  double scale = 0.0;
  std::string note;
};

/// Margins of the named descriptors (all registry entries when `names` is
/// empty) at lambda_{k+1} = candidate using lambda_1..lambda_k.
std::vector<MarginRow> verify_margins(const SpectrumPrefix& prefix, std::size_t k, double candidate,
                                      std::span<const std::string> names = {});

namespace detail {

/// sum A^2 B * sum A C <= sum A^2 * sum A B C for A nonincreasing >= 0 and
/// B, C nondecreasing >= 0 (checked with 1e-12 relative slack). Throws
/// Errc::precondition when the monotonicity hypotheses fail.
bool chebyshev_variant_holds(std::span<const double> A, std::span<const double> B,
                             std::span<const double> C);

}  // namespace detail

}  // namespace unibound
