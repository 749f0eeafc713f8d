#include "rankinlab/common.hpp"

#include <atomic>
#include <thread>

namespace rankinlab {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::InsufficientCoefficients: return "InsufficientCoefficients";
    case ErrorKind::TruncationTooShort: return "TruncationTooShort";
    case ErrorKind::MissingAtkinLehner: return "MissingAtkinLehner";
    case ErrorKind::NotCoprimeLevels: return "NotCoprimeLevels";
    case ErrorKind::EmptyModuli: return "EmptyModuli";
    case ErrorKind::NetworkError: return "NetworkError";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::MalformedData: return "MalformedData";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::VanishingInner: return "VanishingInner";
    case ErrorKind::NumericallyUnstable: return "NumericallyUnstable";
  }
  return "Error";
}

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_max_threads(unsigned n) { g_threads = n; }

unsigned max_threads() {
  unsigned n = g_threads.load();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

}  // namespace rankinlab
