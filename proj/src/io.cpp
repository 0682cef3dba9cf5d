#include "unibound/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace unibound {

std::string format_17(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string json_quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

std::string json_array(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_17(values[i]);
  }
  return out + "]";
}

JsonObject& JsonObject::add(std::string_view key, double value) {
  fields_.emplace_back(std::string(key), format_17(value));
  return *this;
}
JsonObject& JsonObject::add(std::string_view key, std::int64_t value) {
  fields_.emplace_back(std::string(key), std::to_string(value));
  return *this;
}
JsonObject& JsonObject::add(std::string_view key, std::uint64_t value) {
  fields_.emplace_back(std::string(key), std::to_string(value));
  return *this;
}
JsonObject& JsonObject::add(std::string_view key, bool value) {
  fields_.emplace_back(std::string(key), value ? "true" : "false");
  return *this;
}
JsonObject& JsonObject::add(std::string_view key, std::string_view value) {
  fields_.emplace_back(std::string(key), json_quote(value));
  return *this;
}
JsonObject& JsonObject::add_null(std::string_view key) {
  fields_.emplace_back(std::string(key), "null");
  return *this;
}
JsonObject& JsonObject::add_raw(std::string_view key, std::string json) {
  fields_.emplace_back(std::string(key), std::move(json));
  return *this;
}

std::string JsonObject::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (i) out += ',';
    out += json_quote(fields_[i].first);
    out += ':';
    out += fields_[i].second;
  }
  return out + "}";
}

std::string to_json(const BoundResult& r) {
  return JsonObject()
      .add("name", r.name)
      .add("value", r.value)
      .add("method", to_string(r.method))
      .add("iterations", r.iterations)
      .add("residual", r.residual)
      .add("valid", r.valid)
      .str();
}

std::string to_json(const TrialRecord& rec) {
  const auto& r = rec.report;
  JsonObject o;
  o.add("trial", rec.trial).add("seed", rec.seed).add("couple", rec.couple);
  o.add("k", static_cast<std::int64_t>(r.k));
  o.add("status", to_string(r.status));
  if (r.status == TheoremStatus::hypothesis_not_met) {
    o.add("gap", r.gap);
    return o.str();
  }
  o.add("lhs", r.lhs).add("rhs", r.rhs).add("quad_coeff", r.quad_coeff).add("gap", r.gap).add("pass", r.pass);
  return o.str();
}

std::string to_json(const AbstractSummary& s) {
  return JsonObject()
      .add("summary", true)
      .add("trials", s.trials)
      .add("checks", static_cast<std::uint64_t>(s.checks))
      .add("passes", static_cast<std::uint64_t>(s.passes))
      .add("failures", static_cast<std::uint64_t>(s.failures))
      .add("skipped", static_cast<std::uint64_t>(s.skipped))
      .add("worst_slack", s.worst_slack)
      .add("worst_quad_ratio", s.worst_quad)
      .str();
}

void write_spectrum_csv(std::ostream& out, const SpectrumPrefix& prefix) {
  out << "# problem=" << to_string(prefix.problem) << "\n";
  out << "# n=" << prefix.n << "\n";
  out << "# l=" << prefix.l << "\n";
  if (!prefix.label.empty()) out << "# label=" << prefix.label << "\n";
  out << "# count=" << prefix.values.size() << "\n";
  for (double v : prefix.values) out << format_17(v) << "\n";
}

SpectrumFile read_spectrum_csv(std::istream& in) {
  SpectrumFile f;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const auto body = line.substr(first + 1);
      const auto eq = body.find('=');
      if (eq != std::string::npos) {
        auto trim = [](std::string s) {
          const auto a = s.find_first_not_of(" \t");
          const auto b = s.find_last_not_of(" \t");
          return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        f.metadata[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
      }
      continue;
    }
    std::string field = line.substr(first);
    if (const auto comma = field.find(','); comma != std::string::npos) field = field.substr(0, comma);
    try {
      f.values.push_back(parse_number(field));
    } catch (const Error&) {
      throw Error(Errc::parse, "line " + std::to_string(lineno) + ": not a number");
    }
  }
  return f;
}

SpectrumFile read_spectrum_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse, "cannot open " + path);
  return read_spectrum_csv(in);
}

std::vector<TabulatedPoint> read_couple_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse, "cannot open " + path);
  std::vector<TabulatedPoint> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::stringstream ss(line);
    std::string a, b, c, extra;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ',') ||
        std::getline(ss, extra, ','))
      throw Error(Errc::parse, path + ":" + std::to_string(lineno) + ": expected x,f,g");
    pts.push_back({parse_number(a), parse_number(b), parse_number(c)});
  }
  if (pts.empty()) throw Error(Errc::parse, path + ": no table rows");
  return pts;
}

}  // namespace unibound
