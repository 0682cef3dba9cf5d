#include "unibound/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "unibound/abstract.hpp"
#include "unibound/bounds.hpp"
#include "unibound/io.hpp"
#include "unibound/operators.hpp"

namespace unibound::cli {

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!s.empty() && s.back() == ',') throw Error(Errc::parse, "trailing comma in '" + s + "'");
  return out;
}

std::vector<double> parse_reals(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const auto& item : split(s)) out.push_back(parse_number(item));
  if (out.empty()) throw Error(Errc::parse, std::string("empty ") + what);
  return out;
}

std::vector<int> parse_ints(const std::string& s, const char* what) {
  std::vector<int> out;
  for (double v : parse_reals(s, what)) {
    if (v != std::floor(v) || std::abs(v) > 1e9) throw Error(Errc::parse, std::string(what) + " must be integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string config_value(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return format_17(v.get<double>());
  throw Error(Errc::parse, "unsupported config value " + v.dump());
}

struct Options {
  // spectrum
  std::string dims, grid, problem = "laplacian", out_path;
  int count = 0, power = 1;
  // bound / verify spectrum
  std::string ineq, eigs, family;
  int n = 0, l = 0, k = 0;
  double slack = -1.0;
  // verify abstract
  int trials = 100, dim = 8, nops = 3, workers = 1;
  std::vector<std::string> couples;
  std::string ensemble = "dense-gaussian";
  bool corollary = false;
  // couple check
  std::string spec;
  int samples = 32;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

class Emitter {
 public:
  Emitter(std::ostream& out, const std::string& path) : out_(out) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(Errc::parse, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : out_; }

 private:
  std::ostream& out_;
  std::ofstream file_;
};

SpectrumPrefix load_prefix(const Options& o) {
  const auto file = read_spectrum_csv_file(o.eigs);
  SpectrumPrefix p;
  p.values = file.values;
  auto meta = [&](const char* key) -> const std::string* {
    const auto it = file.metadata.find(key);
    return it == file.metadata.end() ? nullptr : &it->second;
  };
  p.n = o.n > 0 ? o.n : (meta("n") ? static_cast<int>(parse_number(*meta("n"))) : 0);
  p.l = o.l > 0 ? o.l : (meta("l") ? static_cast<int>(parse_number(*meta("l"))) : 1);
  if (!o.family.empty())
    p.problem = parse_problem(o.family);
  else if (meta("problem"))
    p.problem = parse_problem(*meta("problem"));
  if (meta("label")) p.label = *meta("label");
  if (p.n < 1) throw Error(Errc::precondition, "dimension n not given (--n or '# n=' metadata)");
  p.validate();
  return p;
}

int cmd_spectrum_box(const Options& o, std::ostream& out) {
  if (o.power != 1) throw Error(Errc::unsupported, "box spectra are Laplacian spectra (power 1)");
  const auto p = box_spectrum(parse_reals(o.dims, "dims"), o.count);
  Emitter e(out, o.out_path);
  write_spectrum_csv(e.stream(), p);
  return kExitOk;
}

int cmd_spectrum_fd(const Options& o, std::ostream& out) {
  auto sides = parse_reals(o.dims, "dims");
  auto grid = parse_ints(o.grid, "grid");
  if (o.problem == "kohn" && sides.size() == 1) sides.assign(3, sides[0]);
  if (grid.size() == 1 && sides.size() > 1) grid.assign(sides.size(), grid[0]);
  DiscreteOperator op;
  if (o.problem == "laplacian")
    op = fd_laplacian(sides, grid);
  else if (o.problem == "clamped")
    op = fd_clamped_plate(sides, grid);
  else if (o.problem == "kohn")
    op = kohn_fd(1, sides, grid).laplacian;
  else
    throw Error(Errc::parse, "unknown problem '" + o.problem + "'");
  SmallestEigsOptions opts;
  if (o.seed_given) opts.seed = o.seed;
  const auto p = operator_power_spectrum(op, o.power, o.count, opts);
  Emitter e(out, o.out_path);
  write_spectrum_csv(e.stream(), p);
  return kExitOk;
}

int cmd_bound(const Options& o, std::ostream& out) {
  const auto p = load_prefix(o);
  const std::size_t k = o.k > 0 ? static_cast<std::size_t>(o.k) : p.size();
  if (o.ineq == "all") {
    for (const auto& r : compute_all_bounds(p, k)) out << to_json(r) << "\n";
    return kExitOk;
  }
  out << to_json(compute_bound(o.ineq, p, k)) << "\n";
  return kExitOk;
}

int cmd_verify_spectrum(const Options& o, std::ostream& out) {
  const auto p = load_prefix(o);
  const bool analytic = p.label == "box";
  const double slack = o.slack >= 0.0 ? o.slack : (analytic ? 0.0 : 1e-3);
  const double allowance = slack + 1e-10;
  std::size_t checks = 0, violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::set<std::string> skipped;
  for (std::size_t k = 1; k < p.size(); ++k) {
    const double candidate = p.values[k];
    for (const auto& row : verify_margins(p, k, candidate)) {
      if (!row.applicable) {
        skipped.insert(row.name);
        continue;
      }
      ++checks;
      const double rel = row.margin / row.scale;
      const bool bad = !(row.margin >= -allowance * row.scale);
      if (bad) ++violations;
      if (!std::isnan(rel)) worst = std::min(worst, rel);
      out << JsonObject()
                 .add("k", static_cast<std::int64_t>(k))
                 .add("name", row.name)
                 .add("candidate", candidate)
                 .add("bound", row.bound)
                 .add("margin", row.margin)
                 .add("valid", row.valid)
                 .add("violation", bad)
                 .str()
          << "\n";
    }
  }
  std::string skipped_json = "[";
  for (const auto& s : skipped) skipped_json += (skipped_json.size() > 1 ? "," : "") + json_quote(s);
  skipped_json += "]";
  out << JsonObject()
             .add("summary", true)
             .add("checks", static_cast<std::uint64_t>(checks))
             .add("violations", static_cast<std::uint64_t>(violations))
             .add("slack", slack)
             .add("worst_relative_margin", checks ? worst : 0.0)
             .add_raw("skipped", skipped_json)
             .str()
      << "\n";
  return violations ? kExitViolation : kExitOk;
}

int cmd_verify_abstract(const Options& o, std::ostream& out) {
  AbstractSuiteConfig c;
  c.trials = o.trials;
  c.dim = o.dim;
  c.nops = o.nops;
  c.seed = o.seed;
  c.workers = o.workers;
  c.corollary = o.corollary;
  c.ensemble = parse_ensemble(o.ensemble);
  if (o.couples.empty()) throw Error(Errc::precondition, "--couple is required");
  for (const auto& s : o.couples) {
    auto spec = parse_couple_spec(s);
    if (spec.family == CoupleFamily::tabulated)
      throw Error(Errc::unsupported, "tabulated couples cannot follow random spectra");
    c.couples.push_back(spec);
  }
  if (c.dim < 2) throw Error(Errc::domain, "--dim must be >= 2");
  if (c.workers < 1) throw Error(Errc::domain, "--workers must be >= 1");
  AbstractSummary summary;
  const auto records = run_abstract_suite(c, summary);
  for (const auto& r : records) out << to_json(r) << "\n";
  out << to_json(summary) << "\n";
  return summary.failures ? kExitViolation : kExitOk;
}

int cmd_couple_check(const Options& o, std::ostream& out) {
  const auto spec = parse_couple_spec(o.spec);
  if (!spec.lambda) throw Error(Errc::parse, "couple check needs a threshold: family:params@lambda");
  std::optional<FunctionCouple> couple;
  std::vector<double> xs;
  if (spec.family == CoupleFamily::tabulated) {
    couple = FunctionCouple::tabulated(read_couple_table(spec.table_path), *spec.lambda);
    for (const auto& p : couple->table()) xs.push_back(p.x);
  } else {
    couple = make_couple(spec);
    if (o.samples < 2) throw Error(Errc::domain, "--samples must be >= 2");
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (static_cast<int>(xs.size()) < o.samples) {
      const double x = *spec.lambda * u(rng);
      if (x > 0.0 && x < *spec.lambda) xs.push_back(x);
    }
  }
  const auto m = check_membership(*couple, xs);
  JsonObject j;
  j.add("spec", o.spec).add("family", to_string(couple->family())).add("pass", m.pass);
  j.add("worst", m.worst).add("tolerance", m.tolerance);
  j.add("evaluations", static_cast<std::uint64_t>(m.evaluations)).add("g_nonincreasing", m.g_nonincreasing);
  if (m.witness)
    j.add_raw("witness", json_array({m.witness->first, m.witness->second}));
  else
    j.add_null("witness");
  j.add("certified_range", couple->in_certified_range());
  if (couple->differentiable()) {
    const auto nec = check_necessary_differentiable(*couple, xs);
    j.add("necessary_pass", nec.pass).add("necessary_worst", nec.worst);
  } else {
    j.add_null("necessary_pass");
  }
  out << j.str() << "\n";
  return m.pass ? kExitOk : kExitViolation;
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] != "--config") {
      out.push_back(args[i]);
      continue;
    }
    if (i + 1 >= args.size()) throw Error(Errc::parse, "--config needs a path");
    const std::string path = args[++i];
    std::ifstream in(path);
    if (!in) throw Error(Errc::parse, "cannot open config " + path);
    nlohmann::json cfg;
    try {
      cfg = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::parse, "config " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw Error(Errc::parse, "config must be a JSON object");
    const bool have_command = std::any_of(out.begin(), out.end(), [](const std::string& s) {
      return !s.empty() && s[0] != '-';
    });
    if (!have_command && cfg.contains("command")) {
      const auto& c = cfg["command"];
      if (c.is_string()) {
        std::stringstream ss(c.get<std::string>());
        std::string w;
        while (ss >> w) out.push_back(w);
      } else if (c.is_array()) {
        for (const auto& w : c) out.push_back(config_value(w));
      } else {
        throw Error(Errc::parse, "config 'command' must be a string or array");
      }
    }
    for (const auto& [key, value] : cfg.items()) {
      if (key == "command") continue;
      const std::string flag = "--" + key;
      if (value.is_boolean()) {
        if (value.get<bool>()) out.push_back(flag);
      } else if (value.is_array()) {
        if (key == "couple") {
          for (const auto& v : value) {
            out.push_back(flag);
            out.push_back(config_value(v));
          }
        } else {
          std::string joined;
          for (const auto& v : value) joined += (joined.empty() ? "" : ",") + config_value(v);
          out.push_back(flag);
          out.push_back(joined);
        }
      } else {
        out.push_back(flag);
        out.push_back(config_value(value));
      }
    }
  }
  return out;
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Universal eigenvalue bounds and commutator inequality checks", "unibound"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.add_option("--config", "JSON file mirroring the command-line flags");

  auto* spectrum = app.add_subcommand("spectrum", "write a spectrum prefix as CSV");
  spectrum->require_subcommand(1);
  auto* box = spectrum->add_subcommand("box", "exact Dirichlet Laplacian spectrum of a box");
  box->add_option("--dims", o.dims, "box side lengths, comma separated")->required();
  box->add_option("--count", o.count, "number of eigenvalues")->required();
  box->add_option("--power", o.power, "operator power (only 1)");
  box->add_option("--out", o.out_path, "output CSV (default stdout)");
  auto* fd = spectrum->add_subcommand("fd", "finite-difference spectrum");
  fd->add_option("--problem", o.problem, "laplacian | clamped | kohn");
  fd->add_option("--dims", o.dims, "box side lengths")->required();
  fd->add_option("--grid", o.grid, "interior points per axis")->required();
  fd->add_option("--power", o.power, "power l applied to the computed eigenvalues");
  fd->add_option("--count", o.count, "number of eigenvalues")->required();
  fd->add_option("--out", o.out_path, "output CSV (default stdout)");
  fd->add_option("--seed", o.seed, "iterative solver start seed")->each([&](const std::string&) { o.seed_given = true; });

  auto* bound = app.add_subcommand("bound", "upper bounds on lambda_{k+1}");
  bound->add_option("--ineq", o.ineq, "descriptor name or 'all'")->required();
  bound->add_option("--eigs", o.eigs, "spectrum CSV")->required();
  bound->add_option("--n", o.n, "dimension n");
  bound->add_option("--l", o.l, "power l");
  bound->add_option("--k", o.k, "use lambda_1..lambda_k (default: all)");
  bound->add_option("--problem", o.family, "euclidean-polyharmonic | heisenberg-kohn");

  auto* verify = app.add_subcommand("verify", "verification suites");
  verify->require_subcommand(1);
  auto* vabs = verify->add_subcommand("abstract", "random operator triples");
  vabs->add_option("--trials", o.trials, "number of random instances");
  vabs->add_option("--dim", o.dim, "matrix dimension d");
  vabs->add_option("--nops", o.nops, "number of (B_p, T_p) pairs");
  vabs->add_option("--couple", o.couples, "couple spec (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  vabs->add_option("--seed", o.seed, "base seed; trial t uses seed + t");
  vabs->add_option("--workers", o.workers, "worker threads");
  vabs->add_option("--ensemble", o.ensemble, "dense-gaussian | sparse | commuting-diagnostic");
  vabs->add_flag("--corollary", o.corollary, "use T_p = [A, B_p]");
  auto* vspec = verify->add_subcommand("spectrum", "margins of every applicable inequality");
  vspec->add_option("--eigs", o.eigs, "spectrum CSV")->required();
  vspec->add_option("--n", o.n, "dimension n");
  vspec->add_option("--l", o.l, "power l");
  vspec->add_option("--problem", o.family, "euclidean-polyharmonic | heisenberg-kohn");
  vspec->add_option("--slack", o.slack, "relative slack (default 0 for box spectra, 1e-3 otherwise)");

  auto* couple = app.add_subcommand("couple", "function couples");
  couple->require_subcommand(1);
  auto* check = couple->add_subcommand("check", "pairwise membership test on samples");
  check->add_option("--spec", o.spec, "family:params@lambda")->required();
  check->add_option("--samples", o.samples, "number of random samples");
  check->add_option("--seed", o.seed, "sample seed");

  try {
    std::vector<std::string> args = expand_config(args_in);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInput;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*box) return cmd_spectrum_box(o, out);
    if (*fd) return cmd_spectrum_fd(o, out);
    if (*bound) return cmd_bound(o, out);
    if (*vabs) return cmd_verify_abstract(o, out);
    if (*vspec) return cmd_verify_spectrum(o, out);
    if (*check) return cmd_couple_check(o, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  err << app.help();
  return kExitInput;
}

}  // namespace unibound::cli
