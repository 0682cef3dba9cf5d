#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace unibound {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using RealMatrix = Matrix<double>;
using RealVector = Vector<double>;
using ComplexMatrix = Matrix<Complex>;
using ComplexVector = Vector<Complex>;

/// Error categories raised by the library. The CLI maps every one of them to
/// exit code 2 (input error); mathematical violations are never exceptions.
enum class Errc {
  domain,          // argument outside the admissible open interval
  lookup,          // tabulated couple queried off its table
  degenerate,      // not enough distinct data to evaluate
  unsupported,     // operation not defined for this family / configuration
  inapplicable,    // bound descriptor does not apply to (problem, n, l)
  invalid_prefix,  // spectrum prefix not positive / not sorted / empty
  hypothesis,      // theorem hypothesis (spectral gap) not met
  membership,      // couple fails the pairwise condition
  shape,           // matrix dimensions do not conform
  not_psd,
  not_symmetric,
  too_large,       // dimension caps
  precondition,
  parse,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Shortest decimal form of `value` that parses back to the same double.
std::string format_number(double value);

/// Parses a complete decimal number; throws Error(Errc::parse) otherwise.
double parse_number(std::string_view text);

}  // namespace unibound
