#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unibound/abstract.hpp"
#include "unibound/bounds.hpp"
#include "unibound/couples.hpp"
#include "unibound/spectrum.hpp"

namespace unibound {

/// printf("%.17g"); "null" for non-finite values.
std::string format_17(double value);

/// Flat JSON object writer with insertion order and %.17g numbers.
class JsonObject {
 public:
  JsonObject& add(std::string_view key, double value);
  JsonObject& add(std::string_view key, int value) { return add(key, static_cast<std::int64_t>(value)); }
  JsonObject& add(std::string_view key, std::int64_t value);
  JsonObject& add(std::string_view key, std::uint64_t value);
  JsonObject& add(std::string_view key, bool value);
  JsonObject& add(std::string_view key, std::string_view value);
  JsonObject& add(std::string_view key, const char* value) { return add(key, std::string_view(value)); }
  JsonObject& add_null(std::string_view key);
  /// Inserts pre-serialized JSON (array or object).
  JsonObject& add_raw(std::string_view key, std::string json);

  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::string json_quote(std::string_view s);
std::string json_array(const std::vector<double>& values);

std::string to_json(const BoundResult& r);
std::string to_json(const TrialRecord& r);
std::string to_json(const AbstractSummary& s);

/// Spectrum CSV: `# key=value` metadata lines, then one value per line.
void write_spectrum_csv(std::ostream& out, const SpectrumPrefix& prefix);

struct SpectrumFile {
  std::vector<double> values;
  std::map<std::string, std::string> metadata;
};

SpectrumFile read_spectrum_csv(std::istream& in);
SpectrumFile read_spectrum_csv_file(const std::string& path);

/// `x,f,g` rows ('#' comments allowed).
std::vector<TabulatedPoint> read_couple_table(const std::string& path);

}  // namespace unibound
