#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "unibound/common.hpp"

namespace unibound {

enum class Problem { euclidean_polyharmonic, heisenberg_kohn };

std::string_view to_string(Problem problem) noexcept;
Problem parse_problem(std::string_view text);

inline constexpr std::size_t kMaxPrefixLength = 100000;

/// lambda_1 <= ... <= lambda_k of (-Delta)^l on a domain of R^n, or of the
/// l-th power of the Kohn Laplacian on a domain of H^n.
struct SpectrumPrefix {
  std::vector<double> values;
  int n = 1;
  int l = 1;
  Problem problem = Problem::euclidean_polyharmonic;
  /// Free-form provenance tag carried into CSV metadata ("box", "fd-laplacian",
  /// "navier-power", ...).
  std::string label;

  /// Throws Errc::invalid_prefix unless values are nonempty, finite, positive
  /// and nondecreasing, n, l >= 1 and the length is within kMaxPrefixLength.
  void validate() const;

  std::size_t size() const noexcept { return values.size(); }

  /// First k values with the same metadata.
  SpectrumPrefix truncated(std::size_t k) const;

  /// S_r = sum_{i <= k} lambda_i^r.
  double power_sum(double r, std::size_t k) const;
};

}  // namespace unibound
