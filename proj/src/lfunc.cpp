#include "rankinlab/lfunc.hpp"

#include <cmath>

#include "rankinlab/arith.hpp"
#include "rankinlab/parallel.hpp"
#include "rankinlab/quad.hpp"
#include "rankinlab/specialfn.hpp"

namespace rankinlab {

std::int64_t conductor(const CuspForm& f, const CuspForm& g) {
  if (gcd64(f.level, g.level) != 1)
    throw Error(ErrorKind::NotCoprimeLevels, "conductor for (M, N) > 1 is not supported");
  std::int64_t q = f.level * g.level;
  return q * q;
}

std::array<cplx, 4> archimedean_mu(const CuspForm& f, const CuspForm& g) {
  using K = CuspForm::Kind;
  if (f.kind == K::holomorphic && g.kind == K::holomorphic) {
    double a = (f.weight + g.weight) / 2.0, b = std::abs(f.weight - g.weight) / 2.0;
    return {cplx(a - 1.0), cplx(a), cplx(b), cplx(b + 1.0)};
  }
  if (f.kind == K::maass && g.kind == K::maass) {
    double t1 = f.spectral, t2 = g.spectral;
    return {cplx(0, t1 + t2), cplx(0, t1 - t2), cplx(0, -t1 + t2), cplx(0, -t1 - t2)};
  }
  const CuspForm& h = f.kind == K::holomorphic ? f : g;
  double t = f.kind == K::maass ? f.spectral : g.spectral;
  double c = (h.weight - 1) / 2.0;
  return {cplx(c, t), cplx(c, -t), cplx(c + 1.0, t), cplx(c + 1.0, -t)};
}

RankinSelbergPair make_rs_pair(std::shared_ptr<const CuspForm> f, std::shared_ptr<const CuspForm> g,
                            std::optional<cplx> eps_phase) {
  if (eps_phase && std::abs(std::abs(*eps_phase) - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidArgument, "root number must have modulus 1");
  RankinSelbergPair p;
  p.conductor = conductor(*f, *g);
  p.mu_inf = archimedean_mu(*f, *g);
  p.f = std::move(f);
  p.g = std::move(g);
  p.eps_phase = eps_phase;
  return p;
}

double q_inf(cplx s, const RankinSelbergPair& pair) {
  double q = 1.0;
  for (const auto& mu : pair.mu_inf) q *= std::abs(s) + std::abs(mu) + 3.0;
  return std::sqrt(q);
}

cplx log_L_inf(cplx s, const RankinSelbergPair& pair) {
  cplx r = 0.0;
  for (const auto& mu : pair.mu_inf) {
    cplx z = s + mu;
    r += -z / 2.0 * std::log(pi) + log_gamma(z / 2.0);
  }
  return r;
}

std::vector<double> rs_dirichlet_coeffs(const RankinSelbergPair& pair, std::int64_t n_max) {
  pair.f->require(n_max, "rs_dirichlet_coeffs");
  pair.g->require(n_max, "rs_dirichlet_coeffs");
  std::int64_t NM = pair.f->level * pair.g->level;
  std::vector<double> b(n_max + 1, 0.0);
  for (std::int64_t d = 1; d * d <= n_max; ++d) {
    if (gcd64(d, NM) != 1) continue;
    for (std::int64_t m = 1; m * d * d <= n_max; ++m) b[m * d * d] += pair.f->lambda[m] * pair.g->lambda[m];
  }
  return b;
}

cplx afe_G(cplx u, int A0) { return std::exp(-16.0 * A0 * std::log(std::cos(pi * u / (4.0 * A0)))); }

CEvalResult afe_weight_V(cplx s, double y, const RankinSelbergPair& pair, const AFEConfig& cfg) {
  if (!(s.real() > 0)) throw Error(ErrorKind::InvalidArgument, "Re(s) must be positive");
  if (!(y > 0)) throw Error(ErrorKind::InvalidArgument, "y must be positive");
  if (cfg.A0 < 1) throw Error(ErrorKind::InvalidArgument, "A0 must be >= 1");
  const double c = 3.0;
  std::int64_t NM = pair.f->level * pair.g->level;
  // Euler product for zeta^{(NM)}(w) at Re w = 2 Re s + 2c; tail sum_{p > P} p^{-sigma} <= P^{1-sigma}/(sigma-1)
  double sigma = 2.0 * s.real() + 2.0 * c;
  std::int64_t P = 2;
  while (P < cfg.truncation_length && std::pow(static_cast<double>(P), 1.0 - sigma) / (sigma - 1.0) > 1e-18) P *= 2;
  P = std::min(P, cfg.truncation_length);
  std::vector<double> logp;
  for (auto p : primes_up_to(P))
    if (NM % p != 0) logp.push_back(std::log(static_cast<double>(p)));
  double euler_tail = std::pow(static_cast<double>(P), 1.0 - sigma) / (sigma - 1.0);
  cplx logL0 = log_L_inf(s, pair);
  double logy = std::log(y);
  auto log_integrand = [&](double tau) {
    cplx u(c, tau);
    cplx lz = 0.0;
    for (double lp : logp) lz -= std::log(1.0 - std::exp(-(2.0 * s + 2.0 * u) * lp));
    return -16.0 * cfg.A0 * std::log(std::cos(pi * u / (4.0 * cfg.A0))) + log_L_inf(s + u, pair) - logL0 + lz -
           u * logy - std::log(u);
  };
  auto f = [&](double tau) { return std::exp(log_integrand(tau)) / (2.0 * pi); };
  double T = cfg.contour_height;
  double tol = cfg.abs_tol;
  if (T <= 0) {
    T = 1.0;
    while (T < 1e4 && std::exp(log_integrand(T).real()) + std::exp(log_integrand(-T).real()) > tol * 1e-3) T *= 1.25;
  }
  double tail_est = (std::exp(log_integrand(T).real()) + std::exp(log_integrand(-T).real())) / (2.0 * pi);
  QuadConfig q;
  q.abs_tol = tol;
  q.rel_tol = 1e-13;
  q.refine = cfg.refine;
  q.oscillation_hint = (std::abs(logy) + 4.0 * std::log(2.0 + T)) / (2.0 * pi) + 1.0;
  auto r = integrate_finite<cplx>(f, -T, T, q);
  // tail: the G factor decays at least like e^{-4 pi |tau|}
  double tail = tail_est / (4.0 * pi);
  double zeta_err = std::abs(r.value) * 2.0 * euler_tail;
  return {r.value, r.abs_err + tail + zeta_err};
}

double smoothed_pair_sum(const CuspForm& f, const CuspForm& g, const SmoothWindow& h, double X) {
  auto lo = static_cast<std::int64_t>(std::ceil(h.A * X));
  auto hi = static_cast<std::int64_t>(std::floor(h.B * X));
  if (hi < 1) return 0.0;
  lo = std::max<std::int64_t>(lo, 1);
  f.require(hi, "smoothed_pair_sum");
  g.require(hi, "smoothed_pair_sum");
  double s = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n)
    s += f.lambda[n] * g.lambda[n] / std::sqrt(static_cast<double>(n)) * h(static_cast<double>(n) / X);
  return s;
}

MomentResult second_moment_geometric(const CuspForm& f, int kappa, std::int64_t M, const SmoothWindow& h, double X,
                                     std::int64_t c_max, double tail_tol) {
  if (kappa < 4 || kappa % 2) throw Error(ErrorKind::InvalidArgument, "kappa must be even >= 4");
  if (M < 1 || c_max < 1) throw Error(ErrorKind::InvalidArgument, "M and c_max must be >= 1");
  auto lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(h.A * X)));
  auto hi = static_cast<std::int64_t>(std::floor(h.B * X));
  MomentResult out;
  if (hi < lo) return out;
  f.require(hi, "second_moment_geometric");
  std::vector<std::int64_t> ns;
  std::vector<double> a;
  for (std::int64_t n = lo; n <= hi; ++n) {
    double w = f.lambda[n] / std::sqrt(static_cast<double>(n)) * h(static_cast<double>(n) / X);
    if (w == 0.0) continue;
    ns.push_back(n);
    a.push_back(w);
  }
  for (double w : a) out.diagonal += w * w;
  // analytic tail past c_max: |S|/c <= 2 sqrt(gcd), |J_{k-1}(x)| <= (x/2)^{k-1}/(k-1)!
  double lf = std::lgamma(static_cast<double>(kappa));
  double tail = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i)
    for (std::size_t j = 0; j < ns.size(); ++j) {
      double mn = static_cast<double>(ns[i]) * static_cast<double>(ns[j]);
      double g = static_cast<double>(gcd64(ns[i], ns[j]));
      double logt = std::log(2.0 * pi * 2.0 * std::sqrt(g) * std::abs(a[i] * a[j])) +
                    (kappa - 1) * std::log(2.0 * pi * std::sqrt(mn)) - lf -
                    (kappa - 2) * std::log(static_cast<double>(c_max)) - std::log(kappa - 2.0);
      tail += std::exp(logt);
    }
  out.truncation_error = tail;
  if (tail > tail_tol)
    throw Error(ErrorKind::TruncationTooShort,
                "tail bound " + std::to_string(tail) + " exceeds tolerance; raise c_max above " + std::to_string(c_max));
  // i^{-kappa} = +-1 for even kappa
  double phase = (kappa % 4 == 0) ? 1.0 : -1.0;
  auto order = BesselOrder::integer(kappa - 1);
  std::vector<std::int64_t> cs;
  for (std::int64_t c = M; c <= c_max; c += M) cs.push_back(c);
  std::vector<double> part(cs.size(), 0.0), perr(cs.size(), 0.0);
  parallel_for(cs.size(), [&](std::size_t idx) {
    std::int64_t c = cs[idx];
    double s = 0.0, e = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i)
      for (std::size_t j = i; j < ns.size(); ++j) {
        auto K = kloosterman(ns[i], ns[j], c);
        if (K.value == 0.0) continue;
        auto J = bessel_j(order, 4.0 * pi * std::sqrt(static_cast<double>(ns[i]) * static_cast<double>(ns[j])) / c);
        double mult = (i == j) ? 1.0 : 2.0;
        double w = mult * a[i] * a[j] / static_cast<double>(c);
        s += w * K.value * J.value;
        e += std::abs(w) * (std::abs(K.value) * J.abs_err + K.residual_imag * std::abs(J.value) + 1e-12 * std::abs(J.value));
      }
    part[idx] = s;
    perr[idx] = e;
  });
  double off = 0.0, err = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    off += part[i];
    err += perr[i];
  }
  out.value = out.diagonal + 2.0 * pi * phase * off;
  out.abs_err = tail + 2.0 * pi * err;
  return out;
}

double thm1_bound(double M, double N, double X, double Z_h, double eps) {
  const double b = thm1_beta;
  double bracket = 1.0 + X / (M * N) + X / std::pow(M, 1.0 + b) +
                   std::pow(1.0 + Z_h, 24.0) * std::pow(N, 4.0 / 3.0) / std::pow(M, 1.0 / 3.0 + b) *
                       (1.0 + std::sqrt(X / (M * N)));
  return bracket * std::pow((1.0 + Z_h) * X * M * N, eps);
}

cplx contour_derivative(const std::function<cplx(cplx)>& F, cplx s0, int j, double radius, int samples) {
  // f^{(j)}(s0) = j!/(2 pi i) oint F(s)/(s-s0)^{j+1} ds, trapezoid on the circle
  cplx sum = 0.0;
  for (int i = 0; i < samples; ++i) {
    cplx z = std::polar(1.0, 2.0 * pi * i / samples);
    sum += F(s0 + radius * z) * std::pow(z, -j);
  }
  return sum / static_cast<double>(samples) * std::exp(std::lgamma(j + 1.0)) / std::pow(radius, j);
}

}  // namespace rankinlab
