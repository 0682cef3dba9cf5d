#include "unibound/spectrum.hpp"

#include <cmath>

namespace unibound {

std::string_view to_string(Problem problem) noexcept {
  switch (problem) {
    case Problem::euclidean_polyharmonic: return "euclidean-polyharmonic";
    case Problem::heisenberg_kohn: return "heisenberg-kohn";
  }
  return "unknown";
}

Problem parse_problem(std::string_view text) {
  if (text == "euclidean-polyharmonic" || text == "euclidean") return Problem::euclidean_polyharmonic;
  if (text == "heisenberg-kohn" || text == "kohn") return Problem::heisenberg_kohn;
  throw Error(Errc::parse, "unknown problem family '" + std::string(text) + "'");
}

void SpectrumPrefix::validate() const {
  if (values.empty()) throw Error(Errc::invalid_prefix, "spectrum prefix is empty");
  if (values.size() > kMaxPrefixLength)
    throw Error(Errc::invalid_prefix, "spectrum prefix longer than " + std::to_string(kMaxPrefixLength));
  if (n < 1 || l < 1) throw Error(Errc::invalid_prefix, "n and l must be >= 1");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || !(v > 0.0))
      throw Error(Errc::invalid_prefix, "eigenvalue " + std::to_string(i + 1) + " = " +
                                            format_number(v) + " is not positive and finite");
    if (i > 0 && v < values[i - 1])
      throw Error(Errc::invalid_prefix, "eigenvalues decrease at index " + std::to_string(i + 1));
  }
}

SpectrumPrefix SpectrumPrefix::truncated(std::size_t k) const {
  if (k < 1 || k > values.size())
    throw Error(Errc::precondition, "k = " + std::to_string(k) + " outside 1.." + std::to_string(values.size()));
  SpectrumPrefix out = *this;
  out.values.resize(k);
  return out;
}

double SpectrumPrefix::power_sum(double r, std::size_t k) const {
  double s = 0.0;
  if (r == 1.0) {
    for (std::size_t i = 0; i < k; ++i) s += values[i];
  } else if (r == 0.5) {
    for (std::size_t i = 0; i < k; ++i) s += std::sqrt(values[i]);
  } else {
    for (std::size_t i = 0; i < k; ++i) s += std::pow(values[i], r);
  }
  return s;
}

}  // namespace unibound
