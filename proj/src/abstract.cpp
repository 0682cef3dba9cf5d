#include "unibound/abstract.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace unibound {

std::string_view to_string(TheoremStatus s) noexcept {
  switch (s) {
    case TheoremStatus::pass: return "pass";
    case TheoremStatus::fail: return "fail";
    case TheoremStatus::hypothesis_not_met: return "hypothesis-not-met";
  }
  return "unknown";
}

std::string_view to_string(Ensemble e) noexcept {
  switch (e) {
    case Ensemble::dense_gaussian: return "dense-gaussian";
    case Ensemble::sparse: return "sparse";
    case Ensemble::commuting_diagnostic: return "commuting-diagnostic";
  }
  return "unknown";
}

Ensemble parse_ensemble(std::string_view text) {
  if (text == "dense-gaussian") return Ensemble::dense_gaussian;
  if (text == "sparse") return Ensemble::sparse;
  if (text == "commuting-diagnostic") return Ensemble::commuting_diagnostic;
  throw Error(Errc::parse, "unknown ensemble '" + std::string(text) + "'");
}

TheoremReport evaluate_theorem(const TripleSpectrum& s, Index k, const FunctionCouple& couple,
                               std::optional<double> z_opt) {
  const Index d = s.lambda.size();
  if (k < 1 || k >= d)
    throw Error(Errc::precondition, "k must lie in 1.." + std::to_string(d - 1));
  const double lk = s.lambda(k - 1), lk1 = s.lambda(k);
  TheoremReport r;
  r.k = k;
  r.gap = lk1 - lk;
  if (!(r.gap > 1e-12 * std::max(1.0, s.norm_A)))
    throw Error(Errc::hypothesis, "lambda_{k+1} = lambda_k at k = " + std::to_string(k));
  const double z = z_opt.value_or(lk1);
  if (!(z > lk) || z > lk1) throw Error(Errc::domain, "z must lie in (lambda_k, lambda_{k+1}]");
  r.z = z;

  const auto c = couple.with_lambda(z);
  std::vector<double> distinct(s.lambda.data(), s.lambda.data() + k);
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() >= 2 && !check_membership(c, distinct).pass)
    throw Error(Errc::membership, c.spec() + " fails membership on lambda_1..lambda_k");

  double first = 0.0, quad = 0.0, second = 0.0, scale = 0.0;
  for (Index i = 0; i < k; ++i) {
    const double x = s.lambda(i);
    const auto fg = c.evaluate(x);
    first += fg.f * (s.corollary ? s.quad(i) : s.commutator_term(i));
    quad += fg.g * s.quad(i);
    second += fg.f * fg.f / (fg.g * (z - x)) * s.tnorm(i);
    scale += fg.g * s.scale(i);
  }
  r.lhs = first * first;
  r.rhs = (s.corollary ? 1.0 : 4.0) * quad * second;
  r.quad_coeff = quad;
  r.quad_scale = scale;
  r.tolerance = kAbstractTolerance * (1.0 + std::abs(r.rhs));
  bool ok = r.lhs <= r.rhs + r.tolerance && quad >= -kAbstractTolerance * scale;
  if (s.corollary) {
    r.identity_residual = s.identity_residual;
    ok = ok && s.identity_residual <= 1e-12 * std::max(1.0, s.identity_scale);
  }
  r.pass = ok;
  r.status = ok ? TheoremStatus::pass : TheoremStatus::fail;
  return r;
}

namespace {

struct Gaussian {
  std::mt19937_64 rng;
  std::normal_distribution<double> normal{0.0, 1.0};
  std::uniform_real_distribution<double> uniform{0.0, 1.0};

  ComplexMatrix matrix(Index d, double density) {
    ComplexMatrix M(d, d);
    for (Index j = 0; j < d; ++j)
      for (Index i = 0; i < d; ++i) {
        const double re = normal(rng), im = normal(rng);
        const bool keep = density >= 1.0 || i == j || uniform(rng) < density;
        M(i, j) = keep ? Complex(re, im) / std::sqrt(2.0) : Complex(0.0, 0.0);
      }
    return M;
  }
};

ComplexMatrix hermitian_part(const ComplexMatrix& M) {
  ComplexMatrix H = (M + M.adjoint()) * 0.5;
  for (Index i = 0; i < H.rows(); ++i) H(i, i) = H(i, i).real();
  return H;
}

ComplexMatrix skew_part(const ComplexMatrix& M) {
  ComplexMatrix S = (M - M.adjoint()) * 0.5;
  for (Index i = 0; i < S.rows(); ++i) S(i, i) = Complex(0.0, S(i, i).imag());
  return S;
}

}  // namespace

ComplexTriple random_instance(Index d, Index n, std::uint64_t seed, Ensemble ensemble) {
  if (d < 2) throw Error(Errc::domain, "dimension must be >= 2");
  if (n < 1) throw Error(Errc::domain, "need at least one operator pair");
  Gaussian g{std::mt19937_64(seed)};
  const double density = ensemble == Ensemble::sparse ? 0.3 : 1.0;
  const ComplexMatrix M = g.matrix(d, density);
  ComplexTriple t;
  t.A = hermitian_part(M);
  t.A.diagonal().array() += M.norm() + 1.0;
  for (Index p = 0; p < n; ++p) {
    if (ensemble == Ensemble::commuting_diagnostic) {
      const double c0 = g.normal(g.rng), c1 = g.normal(g.rng), c2 = g.normal(g.rng);
      const ComplexMatrix A2 = t.A * t.A;
      t.Bs.push_back(hermitian_part(c0 * ComplexMatrix::Identity(d, d) + c1 * t.A + c2 * A2));
    } else {
      t.Bs.push_back(hermitian_part(g.matrix(d, density)));
    }
    t.Ts.push_back(skew_part(g.matrix(d, density)));
  }
  return t;
}

std::vector<TrialRecord> run_abstract_suite(const AbstractSuiteConfig& config, AbstractSummary& summary) {
  if (config.trials < 0) throw Error(Errc::domain, "trial count must be >= 0");
  if (config.couples.empty()) throw Error(Errc::precondition, "no couple given");
  std::vector<FunctionCouple> couples;
  for (const auto& spec : config.couples) couples.push_back(make_couple(spec, 1.0));

  std::vector<std::vector<TrialRecord>> per_trial(static_cast<std::size_t>(config.trials));
  std::vector<std::string> errors(per_trial.size());
  std::atomic<int> next{0};
  auto work = [&] {
    for (int t = next++; t < config.trials; t = next++) {
      try {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(t);
        const auto triple = random_instance(config.dim, config.nops, seed, config.ensemble);
        const auto s = config.corollary ? analyze_corollary(triple.A, triple.Bs) : analyze_triple(triple);
        auto& out = per_trial[t];
        for (std::size_t c = 0; c < couples.size(); ++c) {
          for (Index k = 1; k < config.dim; ++k) {
            TrialRecord rec{t, seed, couples[c].spec(), {}};
            rec.couple = rec.couple.substr(0, rec.couple.rfind('@'));
            const double gap = s.lambda(k) - s.lambda(k - 1);
            if (!(gap > config.min_gap * s.norm_A)) {
              rec.report.k = k;
              rec.report.gap = gap;
              rec.report.z = s.lambda(k);
              rec.report.status = TheoremStatus::hypothesis_not_met;
              out.push_back(rec);
              continue;
            }
            rec.report = evaluate_theorem(s, k, couples[c]);
            out.push_back(rec);
          }
        }
      } catch (const std::exception& e) {
        errors[t] = e.what();
      }
    }
  };
  const int workers = std::max(1, config.workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (std::size_t t = 0; t < errors.size(); ++t)
    if (!errors[t].empty()) throw Error(Errc::precondition, "trial " + std::to_string(t) + ": " + errors[t]);

  summary = {};
  summary.trials = config.trials;
  summary.worst_slack = -std::numeric_limits<double>::infinity();
  summary.worst_quad = std::numeric_limits<double>::infinity();
  std::vector<TrialRecord> records;
  for (auto& v : per_trial)
    for (auto& rec : v) {
      const auto& r = rec.report;
      if (r.status == TheoremStatus::hypothesis_not_met) {
        ++summary.skipped;
      } else {
        ++summary.checks;
        r.pass ? ++summary.passes : ++summary.failures;
        summary.worst_slack = std::max(summary.worst_slack, (r.lhs - r.rhs) / (1.0 + std::abs(r.rhs)));
        if (r.quad_scale > 0.0) summary.worst_quad = std::min(summary.worst_quad, r.quad_coeff / r.quad_scale);
      }
      records.push_back(std::move(rec));
    }
  if (summary.checks == 0) {
    summary.worst_slack = 0.0;
    summary.worst_quad = 0.0;
  }
  if (!std::isfinite(summary.worst_quad)) summary.worst_quad = 0.0;
  return records;
}

}  // namespace unibound
