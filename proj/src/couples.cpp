#include "unibound/couples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace unibound {

namespace {

/// (a^p - b^p) / (a - b) for a, b > 0 without cancellation.
double power_divided_difference(double a, double b, double p) {
  if (p == 0.0) return 0.0;
  if (a == b) return p * std::pow(b, p - 1.0);
  const double r = (a - b) / b;
  return std::pow(b, p - 1.0) * std::expm1(p * std::log1p(r)) / r;
}

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(Errc::domain, "couple threshold lambda must be positive and finite");
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw Error(Errc::domain, std::string(name) + " must be finite");
}

}  // namespace

std::string_view to_string(CoupleFamily family) noexcept {
  switch (family) {
    case CoupleFamily::const_power: return "const-power";
    case CoupleFamily::linear_power: return "linear-power";
    case CoupleFamily::equal_power: return "equal-power";
    case CoupleFamily::neg_power: return "neg-power";
    case CoupleFamily::tabulated: return "tabulated";
  }
  return "unknown";
}

FunctionCouple::FunctionCouple(CoupleFamily family, std::vector<double> params, double lambda)
    : family_(family), params_(std::move(params)), lambda_(lambda) {
  require_lambda(lambda);
  for (double p : params_) require_finite(p, "couple exponent");
}

FunctionCouple FunctionCouple::const_power(double alpha, double lambda) {
  return {CoupleFamily::const_power, {alpha}, lambda};
}

FunctionCouple FunctionCouple::linear_power(double beta, double lambda) {
  return {CoupleFamily::linear_power, {beta}, lambda};
}

FunctionCouple FunctionCouple::equal_power(double delta, double lambda) {
  return {CoupleFamily::equal_power, {delta}, lambda};
}

FunctionCouple FunctionCouple::neg_power(double alpha, double beta, double lambda) {
  return {CoupleFamily::neg_power, {alpha, beta}, lambda};
}

FunctionCouple FunctionCouple::tabulated(std::vector<TabulatedPoint> points, double lambda) {
  FunctionCouple c{CoupleFamily::tabulated, {}, lambda};
  std::sort(points.begin(), points.end(),
            [](const TabulatedPoint& a, const TabulatedPoint& b) { return a.x < b.x; });
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.x > 0.0 && p.x < lambda))
      throw Error(Errc::domain, "tabulated point outside (0, lambda)");
    if (!(p.f > 0.0) || !(p.g > 0.0))
      throw Error(Errc::domain, "tabulated couple values must be positive");
    if (i > 0 && points[i - 1].x == p.x)
      throw Error(Errc::parse, "duplicate tabulated point");
  }
  c.table_ = std::move(points);
  return c;
}

FunctionCouple FunctionCouple::with_lambda(double lambda) const {
  require_lambda(lambda);
  FunctionCouple c = *this;
  c.lambda_ = lambda;
  for (const auto& p : c.table_)
    if (!(p.x < lambda)) throw Error(Errc::domain, "tabulated point not below new lambda");
  return c;
}

FunctionCouple FunctionCouple::scaled(double cf, double cg) const {
  if (!(cf > 0.0) || !(cg > 0.0)) throw Error(Errc::domain, "couple scale factors must be positive");
  FunctionCouple c = *this;
  c.f_scale_ *= cf;
  c.g_scale_ *= cg;
  for (auto& p : c.table_) {
    p.f *= cf;
    p.g *= cg;
  }
  if (family_ == CoupleFamily::tabulated) c.f_scale_ = c.g_scale_ = 1.0;
  return c;
}

bool FunctionCouple::in_certified_range() const noexcept {
  switch (family_) {
    case CoupleFamily::const_power: return params_[0] >= 0.0;
    case CoupleFamily::linear_power: return params_[0] >= 0.5;
    case CoupleFamily::equal_power: return params_[0] > 0.0 && params_[0] <= 2.0;
    case CoupleFamily::neg_power: {
      const double alpha = params_[0], beta = params_[1];
      return alpha < 0.0 && beta >= 1.0 && alpha * alpha <= beta;
    }
    case CoupleFamily::tabulated: return false;
  }
  return false;
}

double FunctionCouple::f_exponent() const noexcept {
  switch (family_) {
    case CoupleFamily::const_power: return 0.0;
    case CoupleFamily::linear_power: return 1.0;
    case CoupleFamily::equal_power: return params_[0];
    case CoupleFamily::neg_power: return params_[0];
    case CoupleFamily::tabulated: break;
  }
  return 0.0;
}

double FunctionCouple::g_exponent() const noexcept {
  switch (family_) {
    case CoupleFamily::const_power: return params_[0];
    case CoupleFamily::linear_power: return params_[0];
    case CoupleFamily::equal_power: return params_[0];
    case CoupleFamily::neg_power: return params_[1];
    case CoupleFamily::tabulated: break;
  }
  return 0.0;
}

void FunctionCouple::check_domain(double x) const {
  if (!(x > 0.0 && x < lambda_))
    throw Error(Errc::domain, "couple evaluated at " + format_number(x) + " outside (0, " +
                                  format_number(lambda_) + ")");
}

CoupleValue FunctionCouple::evaluate(double x) const {
  check_domain(x);
  if (family_ == CoupleFamily::tabulated) {
    auto it = std::lower_bound(table_.begin(), table_.end(), x,
                               [](const TabulatedPoint& p, double v) { return p.x < v; });
    if (it == table_.end() || it->x != x)
      throw Error(Errc::lookup, "no tabulated value at x = " + format_number(x));
    return {it->f, it->g};
  }
  const double a = lambda_ - x;
  return {f_scale_ * std::pow(a, f_exponent()), g_scale_ * std::pow(a, g_exponent())};
}

CoupleValue FunctionCouple::divided_difference(double x, double y) const {
  if (family_ == CoupleFamily::tabulated) {
    const auto fx = evaluate(x), fy = evaluate(y);
    return {(fx.f - fy.f) / (x - y), (fx.g - fy.g) / (x - y)};
  }
  check_domain(x);
  check_domain(y);
  // x - y = b - a, so the quotient carries a minus sign.
  const double a = lambda_ - x, b = lambda_ - y;
  return {-f_scale_ * power_divided_difference(a, b, f_exponent()),
          -g_scale_ * power_divided_difference(a, b, g_exponent())};
}

CoupleValue FunctionCouple::log_derivative(double x) const {
  if (!differentiable())
    throw Error(Errc::unsupported, "tabulated couples have no derivative");
  check_domain(x);
  const double a = lambda_ - x;
  return {-f_exponent() / a, -g_exponent() / a};
}

std::string FunctionCouple::spec() const {
  std::string out(to_string(family_));
  out += ':';
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i) out += ',';
    out += format_number(params_[i]);
  }
  if (family_ == CoupleFamily::tabulated) out += std::to_string(table_.size()) + "-points";
  out += '@';
  out += format_number(lambda_);
  return out;
}

MembershipReport check_membership(const FunctionCouple& couple, std::span<const double> samples) {
  const double lambda = couple.lambda();
  std::vector<double> xs(samples.begin(), samples.end());
  for (double x : xs)
    if (!(x > 0.0 && x < lambda))
      throw Error(Errc::domain, "membership sample " + format_number(x) + " outside (0, lambda)");
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.size() < 2)
    throw Error(Errc::degenerate, "membership check needs at least two distinct samples");

  std::vector<CoupleValue> values;
  std::vector<double> weight;  // f^2 / (g (lambda - x))
  values.reserve(xs.size());
  weight.reserve(xs.size());
  for (double x : xs) {
    const auto v = couple.evaluate(x);
    values.push_back(v);
    weight.push_back(v.f * v.f / (v.g * (lambda - x)));
  }

  MembershipReport report;
  report.worst = -std::numeric_limits<double>::infinity();
  double magnitude = 0.0;
  const double min_gap = 1e-14 * lambda;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      if (xs[j] - xs[i] < min_gap) continue;
      const auto q = couple.divided_difference(xs[i], xs[j]);
      const double first = q.f * q.f;
      const double second = (weight[i] + weight[j]) * q.g;
      const double value = first + second;
      magnitude = std::max({magnitude, std::abs(first), std::abs(second)});
      ++report.evaluations;
      if (value > report.worst) {
        report.worst = value;
        report.witness = std::make_pair(xs[i], xs[j]);
      }
    }
  }
  if (report.evaluations == 0)
    throw Error(Errc::degenerate, "all sample pairs closer than 1e-14 lambda");

  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    if (values[i + 1].g > values[i].g * (1.0 + 1e-12)) report.g_nonincreasing = false;

  report.tolerance = 1e-12 * (1.0 + magnitude);
  report.pass = report.worst <= report.tolerance && report.g_nonincreasing;
  if (report.pass) report.witness.reset();
  return report;
}

MembershipReport check_necessary_differentiable(const FunctionCouple& couple,
                                                std::span<const double> samples) {
  if (!couple.differentiable())
    throw Error(Errc::unsupported, "necessary condition needs a differentiable family");
  MembershipReport report;
  report.worst = std::numeric_limits<double>::infinity();
  double magnitude = 0.0;
  for (double x : samples) {
    const auto d = couple.log_derivative(x);
    const double lhs = d.f * d.f;
    const double rhs = -2.0 / (couple.lambda() - x) * d.g;
    magnitude = std::max({magnitude, std::abs(lhs), std::abs(rhs)});
    ++report.evaluations;
    if (rhs - lhs < report.worst) {
      report.worst = rhs - lhs;
      report.witness = std::make_pair(x, x);
    }
  }
  if (report.evaluations == 0) throw Error(Errc::degenerate, "no samples");
  report.tolerance = 1e-12 * (1.0 + magnitude);
  report.pass = report.worst >= -report.tolerance;
  if (report.pass) report.witness.reset();
  return report;
}

CoupleSpec parse_couple_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw Error(Errc::parse, "couple spec must look like family:params[@lambda]");
  const std::string_view name = text.substr(0, colon);
  std::string_view rest = text.substr(colon + 1);

  CoupleSpec spec{CoupleFamily::const_power, {}, std::nullopt, {}};
  const auto at = rest.rfind('@');
  if (at != std::string_view::npos) {
    spec.lambda = parse_number(rest.substr(at + 1));
    if (!(*spec.lambda > 0.0)) throw Error(Errc::parse, "couple lambda must be positive");
    rest = rest.substr(0, at);
  }

  std::size_t expected = 1;
  if (name == "const-power") {
    spec.family = CoupleFamily::const_power;
  } else if (name == "linear-power") {
    spec.family = CoupleFamily::linear_power;
  } else if (name == "equal-power") {
    spec.family = CoupleFamily::equal_power;
  } else if (name == "neg-power") {
    spec.family = CoupleFamily::neg_power;
    expected = 2;
  } else if (name == "tabulated") {
    spec.family = CoupleFamily::tabulated;
    if (rest.empty()) throw Error(Errc::parse, "tabulated couple needs a table path");
    spec.table_path = std::string(rest);
    return spec;
  } else {
    throw Error(Errc::parse, "unknown couple family '" + std::string(name) + "'");
  }

  while (!rest.empty()) {
    const auto comma = rest.find(',');
    spec.params.push_back(parse_number(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
    if (rest.empty()) throw Error(Errc::parse, "trailing comma in couple spec");
  }
  if (spec.params.size() != expected)
    throw Error(Errc::parse, std::string(name) + " takes " + std::to_string(expected) +
                                 " parameter(s)");
  return spec;
}

FunctionCouple make_couple(const CoupleSpec& spec, std::optional<double> lambda) {
  const auto threshold = lambda ? lambda : spec.lambda;
  if (!threshold) throw Error(Errc::precondition, "couple threshold lambda is not bound");
  switch (spec.family) {
    case CoupleFamily::const_power: return FunctionCouple::const_power(spec.params[0], *threshold);
    case CoupleFamily::linear_power: return FunctionCouple::linear_power(spec.params[0], *threshold);
    case CoupleFamily::equal_power: return FunctionCouple::equal_power(spec.params[0], *threshold);
    case CoupleFamily::neg_power:
      return FunctionCouple::neg_power(spec.params[0], spec.params[1], *threshold);
    case CoupleFamily::tabulated: break;
  }
  throw Error(Errc::unsupported, "tabulated couples are loaded from their table file");
}

}  // namespace unibound
