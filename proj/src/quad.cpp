#include "rankinlab/quad.hpp"

#include <algorithm>

namespace rankinlab {

double envelope_cutoff(const Domain& d, double tol) {
  const auto& e = d.envelope;
  double a = std::max(d.a, 1.0);
  if (e.kind == DecayEnvelope::Kind::exponential) {
    // C e^{-rate T} / rate <= tol
    double T = std::log(e.C / (e.rate * tol)) / e.rate;
    return std::max(T, a + 1.0);
  }
  if (e.rate <= 1.0) throw Error(ErrorKind::InvalidArgument, "algebraic envelope needs rate > 1");
  // C T^{1-rate} / (rate-1) <= tol
  double T = std::pow(e.C / ((e.rate - 1.0) * tol), 1.0 / (e.rate - 1.0));
  return std::max(T, a + 1.0);
}

double envelope_tail(const Domain& d, double cutoff) {
  const auto& e = d.envelope;
  if (e.kind == DecayEnvelope::Kind::exponential) return e.C * std::exp(-e.rate * cutoff) / e.rate;
  return e.C * std::pow(cutoff, 1.0 - e.rate) / (e.rate - 1.0);
}

EvalResult integrate(const std::function<double(double)>& f, const Domain& d, const QuadConfig& cfg) {
  auto r = integrate_domain<double>(f, d, cfg);
  return {r.value, r.abs_err};
}

CEvalResult integrate_complex(const std::function<cplx(double)>& f, const Domain& d, const QuadConfig& cfg) {
  auto r = integrate_domain<cplx>(f, d, cfg);
  return {r.value, r.abs_err};
}

}  // namespace rankinlab
