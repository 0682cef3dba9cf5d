#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unibound/common.hpp"

namespace unibound {

/// Families of positive couples (f, g) on (0, lambda). With a = lambda - x:
///   const-power  (1, a^alpha)           alpha >= 0
///   linear-power (a, a^beta)            beta >= 1/2
///   equal-power  (a^delta, a^delta)     0 < delta <= 2
///   neg-power    (a^alpha, a^beta)      alpha < 0, beta >= 1, alpha^2 <= beta
///   tabulated    explicit sample values (only ever sample-certified)
enum class CoupleFamily { const_power, linear_power, equal_power, neg_power, tabulated };

std::string_view to_string(CoupleFamily family) noexcept;

struct CoupleValue {
  double f;
  double g;
};

struct TabulatedPoint {
  double x;
  double f;
  double g;
};

class FunctionCouple {
 public:
  static FunctionCouple const_power(double alpha, double lambda);
  static FunctionCouple linear_power(double beta, double lambda);
  static FunctionCouple equal_power(double delta, double lambda);
  static FunctionCouple neg_power(double alpha, double beta, double lambda);
  static FunctionCouple tabulated(std::vector<TabulatedPoint> points, double lambda);

  CoupleFamily family() const noexcept { return family_; }
  double lambda() const noexcept { return lambda_; }
  const std::vector<double>& parameters() const noexcept { return params_; }
  const std::vector<TabulatedPoint>& table() const noexcept { return table_; }

  /// Same family and exponents with a new threshold. Tabulated couples keep
  /// their table, so rebinding only makes sense when the table still lies
  /// below the new threshold.
  FunctionCouple with_lambda(double lambda) const;

  /// Multiplies f by cf and g by cg (both > 0). Membership is invariant.
  FunctionCouple scaled(double cf, double cg) const;

  /// True when the exponents lie in the family's certified range.
  bool in_certified_range() const noexcept;
  bool differentiable() const noexcept { return family_ != CoupleFamily::tabulated; }

  CoupleValue evaluate(double x) const;

  /// Divided differences ((f(x)-f(y))/(x-y), (g(x)-g(y))/(x-y)), computed
  /// without cancellation for the analytic families.
  CoupleValue divided_difference(double x, double y) const;

  /// Logarithmic derivatives ((ln f)'(x), (ln g)'(x)); analytic families only.
  CoupleValue log_derivative(double x) const;

  /// Canonical spec string, e.g. "equal-power:2@10".
  std::string spec() const;

 private:
  FunctionCouple(CoupleFamily family, std::vector<double> params, double lambda);

  double f_exponent() const noexcept;
  double g_exponent() const noexcept;
  void check_domain(double x) const;

  CoupleFamily family_;
  std::vector<double> params_;
  double lambda_;
  double f_scale_ = 1.0;
  double g_scale_ = 1.0;
  std::vector<TabulatedPoint> table_;
};

struct MembershipReport {
  bool pass = true;
  /// Largest pairwise condition value (check_membership) or smallest margin
  /// (check_necessary_differentiable).
  double worst = 0.0;
  double tolerance = 0.0;
  /// Failing pair (x < y) for the pairwise check; x duplicated for the
  /// pointwise necessary condition.
  std::optional<std::pair<double, double>> witness;
  std::size_t evaluations = 0;
  bool g_nonincreasing = true;
};

/// Pairwise membership test of the couple on a finite sample set.
MembershipReport check_membership(const FunctionCouple& couple, std::span<const double> samples);

/// Pointwise screen ((ln f)')^2 <= (-2/(lambda-x)) (ln g)'. A failure proves
/// non-membership; a pass proves nothing.
MembershipReport check_necessary_differentiable(const FunctionCouple& couple,
                                                std::span<const double> samples);

/// Parsed form of `family:param[,param]@lambda`. The `@lambda` part is
/// optional; `lambda` is then empty and must be bound later. For the
/// tabulated family the parameter is a path to a CSV of `x,f,g` rows.
struct CoupleSpec {
  CoupleFamily family;
  std::vector<double> params;
  std::optional<double> lambda;
  std::string table_path;
};

CoupleSpec parse_couple_spec(std::string_view text);

/// Builds an analytic couple from a parsed spec, with `lambda` overriding the
/// spec's threshold when given.
FunctionCouple make_couple(const CoupleSpec& spec, std::optional<double> lambda = std::nullopt);

}  // namespace unibound
