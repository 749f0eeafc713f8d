#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace rankinlab {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

enum class ErrorKind {
  NotInvertible,
  InvalidArgument,
  Overflow,
  NonConvergence,
  InsufficientCoefficients,
  TruncationTooShort,
  MissingAtkinLehner,
  NotCoprimeLevels,
  EmptyModuli,
  NetworkError,
  UnknownLabel,
  MalformedData,
  InvariantViolation,
  ArityMismatch,
  VanishingInner,
  NumericallyUnstable,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct EvalResult {
  double value = 0.0;
  double abs_err = 0.0;
};

struct CEvalResult {
  cplx value{0.0, 0.0};
  double abs_err = 0.0;
};

// e(x) = exp(2 pi i x)
inline cplx e_of(double x) { return std::polar(1.0, 2.0 * pi * x); }

// worker cap used by the parallel loops; 0 means hardware concurrency
void set_max_threads(unsigned n);
unsigned max_threads();

}  // namespace rankinlab
