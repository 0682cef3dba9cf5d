#include "unibound/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "unibound/kohn_constants.hpp"
#include "unibound/roots.hpp"

namespace unibound {

namespace {

bool euclid(Problem p) { return p == Problem::euclidean_polyharmonic; }
bool kohn(Problem p) { return p == Problem::heisenberg_kohn; }

bool laplacian(Problem p, int, int l) { return euclid(p) && l == 1; }
bool clamped(Problem p, int, int l) { return euclid(p) && l == 2; }
bool poly(Problem p, int, int) { return euclid(p); }
bool kohn_l1(Problem p, int, int l) { return kohn(p) && l == 1; }
bool kohn_l2(Problem p, int, int l) { return kohn(p) && l == 2; }
bool kohn_odd(Problem p, int, int l) { return kohn(p) && l >= 3 && l % 2 == 1; }
bool kohn_even(Problem p, int, int l) { return kohn(p) && l >= 4 && l % 2 == 0; }

using F = SolverForm;

constexpr std::array<BoundDescriptor, 28> kRegistry{{
    {"ppw-laplacian", F::closed, true, false, laplacian},
    {"hp-laplacian", F::implicit, true, false, laplacian},
    {"yang1-laplacian", F::quadratic, true, false, laplacian},
    {"yang2-laplacian", F::closed, true, false, laplacian},
    {"ppw-clamped", F::closed, true, false, clamped},
    {"ppw-clamped-sharp", F::closed, true, false, clamped},
    {"hileyeh-clamped", F::implicit, true, false, clamped},
    {"hook-chenqian-clamped", F::implicit, true, false, clamped},
    {"hp-weak-clamped", F::implicit, true, false, clamped},
    {"chengyang-clamped", F::implicit, true, false, clamped},
    {"ppw-poly", F::closed, true, false, poly},
    {"hp-poly", F::implicit, true, false, poly},
    {"hp-weak-poly", F::implicit, true, false, poly},
    {"wucao-poly", F::implicit, true, false, poly},
    {"cim-yang-poly", F::quadratic, true, false, poly},
    {"cim-squared-poly", F::implicit, true, true, poly},
    {"kohn-yang-l1", F::quadratic, true, false, kohn_l1},
    {"kohn-chengyang-l2", F::implicit, true, false, kohn_l2},
    {"kohn-yang-l2", F::quadratic, true, false, kohn_l2},
    {"kohn-odd-l", F::implicit, false, false, kohn_odd},
    {"kohn-even-l", F::implicit, true, false, kohn_even},
    {"kohn-odd-l-homog", F::implicit, true, false, kohn_odd},
    {"kohn-yang-odd-l", F::quadratic, false, false, kohn_odd},
    {"kohn-yang-even-l", F::quadratic, true, false, kohn_even},
    {"niuzhang-l1", F::closed, true, false, kohn_l1},
    {"niuzhang-l2", F::closed, true, false, kohn_l2},
    {"niuzhang-odd", F::closed, false, false, kohn_odd},
    {"niuzhang-even", F::closed, true, false, kohn_even},
}};

/// Prefix view lambda_1..lambda_k with the problem constants.
struct Ctx {
  std::span<const double> v;
  double k;
  double n;
  int l;
  double lk;

  double S(double r) const {
    double s = 0.0;
    for (double x : v) s += r == 1.0 ? x : (r == 0.5 ? std::sqrt(x) : std::pow(x, r));
    return s;
  }
  double p(double x, double num) const { return std::pow(x, num / l); }
};

double yang_poly_C(const Ctx& c) { return 4.0 * c.l * (2.0 * c.l + c.n - 2.0) / (c.n * c.n); }
double odd_c1(const Ctx& c) { return kohn_constant_c1(static_cast<int>(c.n), c.l); }
double even_C(const Ctx& c) {
  return 2.0 * c.l * c.n + 4.0 * (c.l - 1) + kohn_constant_c2(static_cast<int>(c.n), c.l);
}

double closed_value(std::string_view name, const Ctx& c) {
  const double n = c.n, k = c.k, l = c.l;
  if (name == "ppw-laplacian") return c.lk + 4.0 * c.S(1) / (n * k);
  if (name == "yang2-laplacian") return (1.0 + 4.0 / n) * c.S(1) / k;
  if (name == "ppw-clamped") return c.lk + 8.0 * (n + 2) * c.S(1) / (n * n * k);
  if (name == "ppw-clamped-sharp") {
    const double s = c.S(0.5);
    return c.lk + 8.0 * (n + 2) * s * s / (n * n * k * k);
  }
  if (name == "ppw-poly")
    return c.lk + 4.0 * l * (2 * l + n - 2) * c.S(1.0 / l) * c.S((l - 1) / l) / (n * n * k * k);
  if (name == "niuzhang-l1") return c.lk + 2.0 * c.S(1) / (n * k);
  if (name == "niuzhang-l2") {
    const double s = c.S(0.5);
    return c.lk + 4.0 * (n + 1) * s * s / (n * n * k * k);
  }
  if (name == "niuzhang-odd") {
    const double bracket = 2.0 * l * (n + l - 1) * c.S((l - 1) / l) +
                           odd_c1(c) * (c.S(1) + c.S((l - 2) / l));
    return c.lk + c.S(1.0 / l) / (n * n * k * k) * bracket;
  }
  if (name == "niuzhang-even")
    return c.lk + c.S(1.0 / l) / (n * n * k * k) * even_C(c) * c.S((l - 1) / l);
  throw Error(Errc::lookup, "no closed form for " + std::string(name));
}

/// Quadratic k z^2 + b z + c <= 0 for the Yang-type descriptors.
std::array<double, 3> quadratic_coeffs(std::string_view name, const Ctx& c) {
  const double n = c.n, l = c.l;
  double C = 0.0;
  if (name == "yang1-laplacian") C = 4.0 / n;
  else if (name == "cim-yang-poly") C = yang_poly_C(c);
  else if (name == "kohn-yang-l1") C = 2.0 / n;
  else if (name == "kohn-yang-l2") C = 4.0 * (n + 1) / (n * n);
  else if (name == "kohn-yang-even-l") C = even_C(c) / (n * n);
  else if (name == "kohn-yang-odd-l") {
    const double c1 = odd_c1(c);
    double W0 = 0.0, W1 = 0.0;
    for (double x : c.v) {
      const double w = 2.0 * l * (n + l - 1) * x + c1 * (c.p(x, l + 1) + c.p(x, l - 1));
      W0 += w;
      W1 += w * x;
    }
    return {c.k, -(2.0 * c.S(1) + W0 / (n * n)), c.S(2) + W1 / (n * n)};
  } else {
    throw Error(Errc::lookup, "no quadratic form for " + std::string(name));
  }
  return {c.k, -(2.0 + C) * c.S(1), (1.0 + C) * c.S(2)};
}

struct Monotone {
  std::function<double(double)> weight;
  double target;
};

Monotone monotone_form(std::string_view name, const Ctx& c) {
  const double n = c.n, k = c.k, l = c.l;
  auto lin = [](double x) { return x; };
  auto root = [](double x) { return std::sqrt(x); };
  if (name == "hp-laplacian") return {lin, n * k / 4.0};
  if (name == "hileyeh-clamped")
    return {root, n * n * std::pow(k, 1.5) / (8.0 * (n + 2) * std::sqrt(c.S(1)))};
  if (name == "hook-chenqian-clamped") return {root, n * n * k * k / (8.0 * (n + 2) * c.S(0.5))};
  if (name == "hp-weak-clamped") return {lin, n * n * k / (8.0 * (n + 2))};
  if (name == "hp-poly")
    return {[l](double x) { return std::pow(x, 1.0 / l); },
            n * n * k * k / (4.0 * l * (2 * l + n - 2) * c.S((l - 1) / l))};
  if (name == "hp-weak-poly") return {lin, n * n * k / (4.0 * l * (2 * l + n - 2))};
  return {nullptr, 0.0};
}

/// Feasibility H(z) <= 0 for the mixed (largest-root) descriptors, plus the
/// closed-form descriptor used to seed the scan cap.
struct LargestRoot {
  std::function<Feasibility(double)> H;
  std::string_view hint;
};

LargestRoot largest_root_form(std::string_view name, const Ctx& c) {
  const double n = c.n, l = c.l;
  const auto v = c.v;
  if (name == "chengyang-clamped") {
    const double coef = std::sqrt(8.0 * (n + 2) / (n * n));
    return {[v, coef](double z) {
              double lhs = 0.0, rhs = 0.0;
              for (double x : v) {
                const double g = std::max(z - x, 0.0);
                lhs += g;
                rhs += std::sqrt(x * g);
              }
              rhs *= coef;
              return Feasibility{lhs - rhs, lhs + rhs};
            },
            "ppw-clamped"};
  }
  if (name == "wucao-poly") {
    const double coef = std::sqrt(4.0 * l * (n + 2 * l - 2)) / n;
    return {[v, coef, l](double z) {
              double lhs = 0.0, a = 0.0, b = 0.0;
              for (double x : v) {
                const double g = std::max(z - x, 0.0);
                lhs += g;
                const double s = std::sqrt(g);
                a += s * std::pow(x, (l - 1) / l);
                b += s * std::pow(x, 1.0 / l);
              }
              const double rhs = coef * std::sqrt(a * b);
              return Feasibility{lhs - rhs, lhs + rhs};
            },
            "ppw-poly"};
  }
  // Kohn forms: sum g^2 <= coef sqrt(sum g lambda^{1/l} * sum g^2 w(lambda)).
  std::function<double(double)> w;
  double coef = 1.0 / n;
  std::string_view hint;
  if (name == "kohn-chengyang-l2") {
    coef = 2.0 * std::sqrt(n + 1) / n;
    w = [](double x) { return std::sqrt(x); };
    hint = "niuzhang-l2";
  } else if (name == "kohn-odd-l") {
    const double c1 = odd_c1(c);
    w = [n, l, c1](double x) {
      return 2.0 * l * (n + l - 1) * std::pow(x, (l - 1) / l) + c1 * (x + std::pow(x, (l - 2) / l));
    };
    hint = "niuzhang-odd";
  } else if (name == "kohn-even-l") {
    const double C = even_C(c);
    w = [C, l](double x) { return C * std::pow(x, (l - 1) / l); };
    hint = "niuzhang-even";
  } else if (name == "kohn-odd-l-homog") {
    const double C = 2.0 * l * (n + l - 1) + odd_c1(c);
    w = [C, l](double x) { return C * std::pow(x, (l - 1) / l); };
    hint = "niuzhang-odd";
  } else {
    return {nullptr, {}};
  }
  std::vector<double> wv, cv;
  for (double x : v) {
    wv.push_back(w(x));
    cv.push_back(std::pow(x, 1.0 / l));
  }
  return {[v, wv, cv, coef](double z) {
            double lhs = 0.0, a = 0.0, b = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
              const double g = std::max(z - v[i], 0.0);
              lhs += g * g;
              a += g * cv[i];
              b += g * g * wv[i];
            }
            const double rhs = coef * std::sqrt(a * b);
            return Feasibility{lhs - rhs, lhs + rhs};
          },
          hint};
}

Ctx make_ctx(const SpectrumPrefix& prefix, std::size_t k) {
  return {std::span<const double>(prefix.values.data(), k), static_cast<double>(k),
          static_cast<double>(prefix.n), prefix.l, prefix.values[k - 1]};
}

void check_k(const SpectrumPrefix& prefix, std::size_t k) {
  prefix.validate();
  if (k < 1 || k > prefix.size())
    throw Error(Errc::precondition,
                "k = " + std::to_string(k) + " outside 1.." + std::to_string(prefix.size()));
}

const BoundDescriptor& applicable_descriptor(std::string_view name, const SpectrumPrefix& prefix) {
  const auto& d = find_descriptor(name);
  if (!is_applicable(d, prefix))
    throw Error(Errc::inapplicable, std::string(name) + " does not apply to " +
                                        std::string(to_string(prefix.problem)) +
                                        " with n=" + std::to_string(prefix.n) +
                                        ", l=" + std::to_string(prefix.l));
  return d;
}

BoundResult compute_unchecked(const BoundDescriptor& d, const Ctx& c) {
  BoundResult out;
  out.name = std::string(d.name);
  out.method = d.form;
  if (d.form == SolverForm::closed) {
    out.value = closed_value(d.name, c);
    out.valid = true;
    return out;
  }
  if (d.form == SolverForm::quadratic) {
    const auto [a, b, cc] = quadratic_coeffs(d.name, c);
    const auto z = larger_quadratic_root(a, b, cc);
    if (!z) {
      out.value = std::numeric_limits<double>::quiet_NaN();
      out.note = "negative discriminant";
      return out;
    }
    double root = *z;
    out.residual = std::abs((a * root + b) * root + cc) / (a * root * root + std::abs(b) * root + std::abs(cc));
    if (root < c.lk) {
      // near a double root the computed root is only sqrt(eps) accurate, so
      // decide by the residual at lambda_k
      const double at_lk = (a * c.lk + b) * c.lk + cc;
      const double mag = a * c.lk * c.lk + std::abs(b) * c.lk + std::abs(cc);
      if (root < c.lk * (1.0 - kRootTolerance) && at_lk > kRootTolerance * mag) {
        out.value = root;
        out.note = "larger root below lambda_k";
        return out;
      }
      root = c.lk;
    }
    out.value = root;
    out.valid = true;
    return out;
  }
  if (auto m = monotone_form(d.name, c); m.weight) {
    const auto v = c.v;
    std::vector<double> w;
    w.reserve(v.size());
    for (double x : v) w.push_back(m.weight(x));
    auto G = [&](double z) {
      double s = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) s += w[i] / (z - v[i]);
      return s;
    };
    const auto r = solve_monotone_bound(G, c.lk, m.target);
    out.value = r.root;
    out.iterations = r.iterations;
    out.residual = r.residual / std::abs(m.target);
    out.valid = r.valid;
    out.note = r.note;
    return out;
  }
  const auto lr = largest_root_form(d.name, c);
  if (!lr.H) throw Error(Errc::lookup, "no solver for " + std::string(d.name));
  const double hint = closed_value(lr.hint, c);
  const auto r = solve_largest_root_bound(lr.H, c.lk, hint);
  out.value = r.root;
  out.iterations = r.iterations;
  out.residual = r.residual;
  out.valid = r.valid;
  out.note = r.note;
  return out;
}

}  // namespace

std::string_view to_string(SolverForm form) noexcept {
  switch (form) {
    case SolverForm::closed: return "closed";
    case SolverForm::quadratic: return "quadratic";
    case SolverForm::implicit: return "implicit";
  }
  return "unknown";
}

std::span<const BoundDescriptor> bound_registry() { return kRegistry; }

const BoundDescriptor& find_descriptor(std::string_view name) {
  for (const auto& d : kRegistry)
    if (d.name == name) return d;
  throw Error(Errc::lookup, "unknown inequality '" + std::string(name) + "'");
}

bool is_applicable(const BoundDescriptor& d, const SpectrumPrefix& prefix) noexcept {
  return d.applies(prefix.problem, prefix.n, prefix.l);
}

BoundResult compute_bound(std::string_view name, const SpectrumPrefix& prefix, std::size_t k) {
  check_k(prefix, k);
  const auto& d = applicable_descriptor(name, prefix);
  if (d.verification_only)
    throw Error(Errc::unsupported, std::string(name) + " is verification-only (no bound extraction)");
  return compute_unchecked(d, make_ctx(prefix, k));
}

std::vector<BoundResult> compute_all_bounds(const SpectrumPrefix& prefix, std::size_t k) {
  check_k(prefix, k);
  const auto c = make_ctx(prefix, k);
  std::vector<BoundResult> out;
  for (const auto& d : kRegistry)
    if (!d.verification_only && is_applicable(d, prefix)) out.push_back(compute_unchecked(d, c));
  return out;
}

ChainReport chain_compare(const SpectrumPrefix& prefix, std::size_t k) {
  check_k(prefix, k);
  if (prefix.problem != Problem::euclidean_polyharmonic || prefix.l != 1)
    throw Error(Errc::inapplicable, "chain comparison needs the Euclidean l = 1 problem");
  const auto c = make_ctx(prefix, k);
  ChainReport r;
  r.yang1 = compute_unchecked(find_descriptor("yang1-laplacian"), c);
  r.yang2 = compute_unchecked(find_descriptor("yang2-laplacian"), c);
  r.hp = compute_unchecked(find_descriptor("hp-laplacian"), c);
  r.ppw = compute_unchecked(find_descriptor("ppw-laplacian"), c);
  const std::array<const BoundResult*, 4> chain{&r.yang1, &r.yang2, &r.hp, &r.ppw};
  bool all_valid = true;
  r.worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    all_valid = all_valid && chain[i]->valid;
    const double excess = (chain[i]->value - chain[i + 1]->value) / chain[i + 1]->value;
    r.worst_excess = std::max(r.worst_excess, excess);
  }
  all_valid = all_valid && r.ppw.valid;
  r.ordered = all_valid && r.worst_excess <= kChainSlack;
  return r;
}

double check_general_poly(const SpectrumPrefix& prefix, double next, const FunctionCouple& couple) {
  prefix.validate();
  const double lk = prefix.values.back();
  if (!(next > lk)) throw Error(Errc::domain, "next must exceed lambda_k");
  if (std::abs(couple.lambda() - next) > 1e-15 * next)
    throw Error(Errc::precondition, "couple threshold must equal next");
  std::vector<double> distinct(prefix.values);
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() >= 2) {
    const auto m = check_membership(couple, distinct);
    if (!m.pass) throw Error(Errc::membership, couple.spec() + " fails membership on the prefix");
  }
  const double n = prefix.n, l = prefix.l;
  double lhs = 0.0, a = 0.0, b = 0.0;
  for (double x : prefix.values) {
    const auto fg = couple.evaluate(x);
    lhs += fg.f;
    a += fg.g * std::pow(x, (l - 1) / l);
    b += fg.f * fg.f / (fg.g * (next - x)) * std::pow(x, 1.0 / l);
  }
  const double rhs = 2.0 / n * std::sqrt(l * (2 * l + n - 2)) * std::sqrt(a) * std::sqrt(b);
  return rhs - lhs;
}

namespace {

std::pair<double, double> cim_squared_sides(const SpectrumPrefix& prefix, double next) {
  const double n = prefix.n, l = prefix.l;
  double s2 = 0.0, a = 0.0, b = 0.0;
  for (double x : prefix.values) {
    const double g = next - x;
    s2 += g * g;
    a += g * g * std::pow(x, (l - 1) / l);
    b += g * std::pow(x, 1.0 / l);
  }
  const double lhs = s2 * s2;
  const double rhs = 4.0 * l * (2 * l + n - 2) / (n * n) * a * b;
  return {std::sqrt(lhs), std::sqrt(rhs)};
}

}  // namespace

double cim_squared_margin(const SpectrumPrefix& prefix, double next) {
  prefix.validate();
  const auto [lhs, rhs] = cim_squared_sides(prefix, next);
  return rhs - lhs;
}

std::vector<MarginRow> verify_margins(const SpectrumPrefix& prefix, std::size_t k, double candidate,
                                      std::span<const std::string> names) {
  check_k(prefix, k);
  if (!(candidate >= prefix.values[k - 1]))
    throw Error(Errc::domain, "candidate lambda_{k+1} below lambda_k");
  std::vector<std::string_view> which;
  if (names.empty())
    for (const auto& d : kRegistry) which.push_back(d.name);
  else
    for (const auto& s : names) which.push_back(s);

  const auto c = make_ctx(prefix, k);
  std::vector<MarginRow> rows;
  for (auto name : which) {
    const auto& d = find_descriptor(name);
    MarginRow row;
    row.name = std::string(name);
    row.applicable = is_applicable(d, prefix);
    if (!row.applicable) {
      row.note = "skipped: not applicable";
      rows.push_back(row);
      continue;
    }
    if (d.verification_only) {
      row.bound = std::numeric_limits<double>::quiet_NaN();
      const auto [lhs, rhs] = cim_squared_sides(prefix.truncated(k), candidate);
      row.margin = rhs - lhs;
      row.scale = std::max(lhs, rhs);
      row.valid = true;
    } else {
      const auto r = compute_unchecked(d, c);
      row.bound = r.value;
      row.margin = r.value - candidate;
      row.scale = candidate;
      row.valid = r.valid;
      row.note = r.note;
    }
    rows.push_back(row);
  }
  return rows;
}

namespace detail {

bool chebyshev_variant_holds(std::span<const double> A, std::span<const double> B,
                             std::span<const double> C) {
  const std::size_t k = A.size();
  if (B.size() != k || C.size() != k || k == 0)
    throw Error(Errc::shape, "Chebyshev variant needs three sequences of equal positive length");
  for (std::size_t i = 0; i < k; ++i) {
    if (A[i] < 0.0 || B[i] < 0.0 || C[i] < 0.0)
      throw Error(Errc::precondition, "Chebyshev variant needs nonnegative sequences");
    if (i > 0 && (A[i] > A[i - 1] || B[i] < B[i - 1] || C[i] < C[i - 1]))
      throw Error(Errc::precondition, "Chebyshev variant monotonicity violated");
  }
  double a2b = 0.0, ac = 0.0, a2 = 0.0, abc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    a2b += A[i] * A[i] * B[i];
    ac += A[i] * C[i];
    a2 += A[i] * A[i];
    abc += A[i] * B[i] * C[i];
  }
  const double lhs = a2b * ac, rhs = a2 * abc;
  return lhs <= rhs + 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace detail

}  // namespace unibound
