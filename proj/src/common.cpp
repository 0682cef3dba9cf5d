#include "unibound/common.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace unibound {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::domain: return "domain";
    case Errc::lookup: return "lookup";
    case Errc::degenerate: return "degenerate";
    case Errc::unsupported: return "unsupported";
    case Errc::inapplicable: return "inapplicable";
    case Errc::invalid_prefix: return "invalid-prefix";
    case Errc::hypothesis: return "hypothesis";
    case Errc::membership: return "membership";
    case Errc::shape: return "shape";
    case Errc::not_psd: return "not-psd";
    case Errc::not_symmetric: return "not-symmetric";
    case Errc::too_large: return "too-large";
    case Errc::precondition: return "precondition";
    case Errc::parse: return "parse";
  }
  return "unknown";
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last)
    throw Error(Errc::parse, "not a number: '" + std::string(text) + "'");
  return value;
}

}  // namespace unibound
