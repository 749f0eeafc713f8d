#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rankinlab/common.hpp"

namespace rankinlab {

struct CuspForm {
  enum class Kind { holomorphic, maass } kind = Kind::holomorphic;
  std::int64_t level = 1;
  int weight = 12;        // holomorphic
  double spectral = 0.0;  // maass t_f
  std::vector<double> lambda;  // lambda[n] for 1 <= n <= n_max; lambda[0] unused
  bool is_newform = true;
  std::string label;
  std::map<std::int64_t, double> atkin_lehner;  // eta(N2) when known
  std::optional<int> reflection;                // eps_f for Maass forms

  std::int64_t n_max() const { return lambda.empty() ? 0 : static_cast<std::int64_t>(lambda.size()) - 1; }
  double at(std::int64_t n) const;  // throws InsufficientCoefficients
  void require(std::int64_t n, const char* what) const;
};

// exact tau(n) for 1 <= n <= n_max
std::vector<__int128> ramanujan_tau(int n_max);
CuspForm delta_oracle(int n_max);

// Invariant checks applied on load; throws InvariantViolation
void validate_form(const CuspForm& f);

struct CoefficientSource {
  enum class Kind { local_file, lmfdb } kind = Kind::local_file;
  std::string location;   // directory (local) or service base URL (lmfdb); empty = default
  std::string cache_dir;  // RANKINLAB_CACHE overrides when set
};

CuspForm load_form(const CoefficientSource& src, const std::string& label);
CuspForm parse_form_file(const std::string& text, const std::string& origin);
std::string format_form_file(const CuspForm& f);

// base URL of the LMFDB service (RANKINLAB_LMFDB_URL or the public endpoint)
std::string lmfdb_base_url();
std::string default_cache_dir();

struct HeckeReport {
  double max_violation = 0.0;
  double max_relative = 0.0;
  std::int64_t worst_m = 0, worst_n = 0;
  std::int64_t checked = 0;
};

HeckeReport hecke_check(const CuspForm& f, std::int64_t m_max, std::int64_t n_max);
cplx wilton_sum(const CuspForm& f, double X, double alpha);
double rankin_sum(const CuspForm& f, double x);

}  // namespace rankinlab
