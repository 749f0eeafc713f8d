#include "rankinlab/specialfn.hpp"

#include <cfloat>
#include <cmath>
#include <limits>

#include "rankinlab/quad.hpp"

namespace rankinlab {

BesselOrder BesselOrder::integer(int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "integer Bessel order must be >= 0");
  return {Kind::integer, static_cast<double>(n)};
}

BesselOrder BesselOrder::real(double v) {
  if (!(v > -1.0)) throw Error(ErrorKind::InvalidArgument, "real Bessel order must exceed -1");
  return {Kind::real, v};
}

BesselOrder BesselOrder::imaginary(double t, double t_max) {
  if (!(std::abs(t) <= t_max)) throw Error(ErrorKind::InvalidArgument, "|t| exceeds the configured maximum");
  return {Kind::imaginary, t};
}

cplx BesselOrder::order() const {
  if (kind == Kind::imaginary) return {0.0, 2.0 * value};
  return {value, 0.0};
}

KernelForm KernelForm::holomorphic(int k) {
  if (k < 2 || k % 2) throw Error(ErrorKind::InvalidArgument, "holomorphic weight must be even >= 2");
  return {Kind::holomorphic, k, {0.0, 0.0}};
}

KernelForm KernelForm::maass(cplx t) {
  if (t.real() != 0.0 && t.imag() != 0.0)
    throw Error(ErrorKind::InvalidArgument, "spectral parameter must be real or purely imaginary");
  if (std::abs(t.imag()) >= 0.25) throw Error(ErrorKind::InvalidArgument, "exceptional parameter must satisfy |r| < 1/4");
  return {Kind::maass, 0, t};
}

// Lanczos, g = 7
cplx log_gamma(cplx z) {
  static const double c[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059,   12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1-z)
    return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  cplx x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
  cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// --- J: Taylor series

EvalResult bessel_j_taylor(double v, double x) {
  if (x < 0) throw Error(ErrorKind::InvalidArgument, "x must be >= 0");
  if (x == 0.0) return {v == 0.0 ? 1.0 : 0.0, 0.0};
  using ld = long double;
  ld half = static_cast<ld>(x) / 2;
  ld log0 = static_cast<ld>(v) * std::log(half) - std::lgamma(static_cast<ld>(v) + 1);
  // largest term sits near m ~ x/2; its log is about log0 + x
  if (log0 + x > 11000.0L) throw Error(ErrorKind::Overflow, "Taylor terms exceed long double range");
  ld term = std::exp(log0);
  ld sum = term, abs_sum = std::abs(term);
  ld q = half * half;
  for (int m = 1; m < 100000; ++m) {
    ld ratio = q / (static_cast<ld>(m) * (static_cast<ld>(m) + v));
    term *= -ratio;
    if (ratio < 0.5L && std::abs(term) < 1e-22L * std::abs(sum)) {
      ld tail = 2 * std::abs(term);
      double val = static_cast<double>(sum);
      double err = static_cast<double>(tail + 8 * LDBL_EPSILON * abs_sum * m) +
                   std::numeric_limits<double>::epsilon() * std::abs(val);
      if (!std::isfinite(val) || !std::isfinite(err))
        throw Error(ErrorKind::Overflow, "Taylor terms exceed double range");
      return {val, err};
    }
    if (ratio < 0.5L && term == 0.0L) break;
    sum += term;
    abs_sum += std::abs(term);
  }
  double val = static_cast<double>(sum);
  return {val, static_cast<double>(8 * LDBL_EPSILON * abs_sum) + DBL_EPSILON * std::abs(val)};
}

// --- the integral (1/Gamma(v+1/2)) int e^{-u} u^{v-1/2} (1+u/2z)^{v-1/2} du

namespace {

bool hankel_series(cplx v, cplx z, CEvalResult& out) {
  cplx v2 = v * v;
  cplx term = 1.0, sum = 1.0;
  double abs_sum = 1.0, prev = 1.0;
  bool real_order = v.imag() == 0.0;
  for (int j = 1; j < 400; ++j) {
    double jh = j - 0.5;
    term *= (v2 - jh * jh) / (2.0 * j * z);
    double mag = std::abs(term);
    if (mag == 0.0) {
      out = {sum, 4 * DBL_EPSILON * abs_sum};
      return true;
    }
    if (mag < 1e-17 * std::abs(sum)) {
      double safety = real_order ? 2.0 : 10.0;
      out = {sum, safety * mag + 4 * DBL_EPSILON * abs_sum};
      return true;
    }
    // asymptotic divergence sets in once terms grow past j > |v|
    if (mag > prev && j > std::abs(v) + 1.0) return false;
    prev = mag;
    sum += term;
    abs_sum += mag;
  }
  return false;
}

CEvalResult hankel_quadrature(cplx v, cplx z, double refine) {
  const double sigma = v.real();
  const double a = sigma + 0.5;
  if (!(a > 0)) throw Error(ErrorKind::InvalidArgument, "hankel integral needs Re v > -1/2");
  cplx lg = log_gamma(v + 0.5);
  cplx inv2z = 1.0 / (2.0 * z);
  auto logg = [&](double w) {
    double u = std::exp(w);
    return -u + (v + 0.5) * w - lg + (v - 0.5) * std::log(1.0 + u * inv2z);
  };
  auto g = [&](double w) { return std::exp(logg(w)); };
  const double log_tol = std::log(1e-18);
  double w_min = (log_tol + lg.real()) / a;
  w_min = std::min(w_min, -1.0);
  double w_peak = std::log(std::max(sigma, 1.0));
  double w_max = w_peak;
  double lv = 0.0;
  for (int i = 0; i < 400; ++i) {
    w_max += 0.25;
    lv = logg(w_max).real();
    if (lv < log_tol && std::exp(w_max) > 2.0 * (std::abs(v) + 1.0)) break;
  }
  QuadConfig cfg;
  cfg.rel_tol = 1e-14;
  cfg.abs_tol = 1e-17;
  cfg.oscillation_hint = (std::abs(v.imag()) + std::abs(v - 0.5) + 1.0) / (2.0 * pi);
  cfg.refine = refine;
  cfg.max_panels = 400000;
  auto r = integrate_finite<cplx>(g, w_min, w_max, cfg);
  double lower_tail = std::exp(a * w_min - lg.real()) / a * std::exp(std::abs(v.imag()) * 1e-3);
  double upper_tail = std::exp(lv);
  return {r.value, r.abs_err + lower_tail + upper_tail};
}

}  // namespace

CEvalResult hankel_integral(cplx v, cplx z, WMethod method, double refine) {
  if (std::abs(z) == 0.0 || z.real() < 0) throw Error(ErrorKind::InvalidArgument, "hankel integral needs Re z >= 0, z != 0");
  if (method != WMethod::quadrature) {
    CEvalResult s;
    if (hankel_series(v, z, s)) return s;
    if (method == WMethod::series) throw Error(ErrorKind::NonConvergence, "asymptotic series does not reach tolerance");
  }
  return hankel_quadrature(v, z, refine);
}

CEvalResult phase_w(const BesselOrder& order, double x, WMethod method) {
  if (!(x > 0)) throw Error(ErrorKind::InvalidArgument, "phase_w needs x > 0");
  cplx v = order.order();
  if (!(v.real() > -0.5)) throw Error(ErrorKind::InvalidArgument, "phase_w needs Re v > -1/2");
  auto I = hankel_integral(v, cplx(0.0, -x), method);
  cplx pre = std::exp(cplx(0.0, -1.0) * (pi * v / 2.0 + pi / 4.0)) / std::sqrt(2.0 * pi * x);
  return {pre * I.value, std::abs(pre) * I.abs_err};
}

EvalResult bessel_j_phase(double v, double x) {
  auto W = phase_w(BesselOrder{BesselOrder::Kind::real, v}, x, WMethod::automatic);
  double val = 2.0 * (std::polar(1.0, x) * W.value).real();
  return {val, 2.0 * W.abs_err + 4 * DBL_EPSILON * std::abs(W.value)};
}

// Miller backward recurrence normalised by J_0 + 2 sum J_{2k} = 1
EvalResult bessel_j_recurrence(int n, double x) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "order must be >= 0");
  if (x == 0.0) return {n == 0 ? 1.0 : 0.0, 0.0};
  double big = std::max<double>(n, x);
  int start = 2 * ((static_cast<int>(big) + 20 + static_cast<int>(std::sqrt(60.0 * big))) / 2);
  double bjp = 0.0, bj = 1.0, ans = 0.0, norm = 0.0;
  for (int j = start; j > 0; --j) {
    double bjm = 2.0 * j / x * bj - bjp;
    bjp = bj;
    bj = bjm;
    if (std::abs(bj) > 1e250) {
      bj *= 1e-250;
      bjp *= 1e-250;
      ans *= 1e-250;
      norm *= 1e-250;
    }
    if (j - 1 == n) ans = bj;
    if ((j - 1) % 2 == 0 && j - 1 > 0) norm += 2.0 * bj;
  }
  norm += bj;
  double val = ans / norm;
  return {val, 1e-14};
}

EvalResult bessel_j(const BesselOrder& order, double x) {
  if (x < 0) throw Error(ErrorKind::InvalidArgument, "x must be >= 0");
  if (order.kind == BesselOrder::Kind::imaginary)
    throw Error(ErrorKind::InvalidArgument, "bessel_j takes integer or real order");
  double v = order.value;
  if (x <= 10.0) return bessel_j_taylor(v, x);
  bool well_conditioned = v * v * v <= 24.0 * x * x;
  // below x ~ 30 the Hankel series cannot reach full accuracy and W falls back to quadrature
  if (order.kind == BesselOrder::Kind::integer) {
    if (!well_conditioned || x <= 30.0) return bessel_j_recurrence(static_cast<int>(v), x);
    // the phase path is cheap only when its asymptotic series converges without cancellation
    CEvalResult I;
    if (!hankel_series(cplx(v, 0.0), cplx(0.0, -x), I) || I.abs_err > 1e-14 * std::abs(I.value))
      return bessel_j_recurrence(static_cast<int>(v), x);
    cplx pre = std::exp(cplx(0.0, -1.0) * (pi * v / 2.0 + pi / 4.0)) / std::sqrt(2.0 * pi * x);
    cplx W = pre * I.value;
    return {2.0 * (std::polar(1.0, x) * W).real(), 2.0 * std::abs(pre) * I.abs_err + 4 * DBL_EPSILON * std::abs(W)};
  }
  return bessel_j_phase(v, x);
}

// --- imaginary order K and Y

namespace {
// K_{i mu}(x) = -pi Im I_{i mu}(x) / sinh(pi mu), real mu > 0
EvalResult k_imag_series(double mu, double x) {
  cplx lg = log_gamma(cplx(1.0, mu));
  double ls = pi * mu + std::log1p(-std::exp(-2.0 * pi * mu)) - std::log(2.0);
  double phase = mu * std::log(x / 2.0);
  cplx term = std::exp(cplx(-ls, phase) - lg);
  cplx s = 0.0;
  double mx = 0.0, q = x * x / 4.0;
  int k = 0;
  for (; k < 5000; ++k) {
    s += term;
    mx = std::max(mx, std::abs(term));
    term *= q / ((k + 1.0) * cplx(k + 1.0, mu));
    if (k > q && std::abs(term) < 1e-18 * mx) break;
  }
  // summation round-off plus the rounding of the common prefactor's phase
  double err = pi * (mx * DBL_EPSILON * (k + 1) +
                     std::abs(s) * 4 * DBL_EPSILON * (std::abs(lg) + std::abs(phase) + ls + 1.0));
  return {-pi * s.imag(), err};
}
}  // namespace

EvalResult bessel_k_imag(cplx t, double x) {
  if (!(x > 0)) throw Error(ErrorKind::InvalidArgument, "x must be > 0");
  if (x > 700.0) return {0.0, 1e-300};
  // large |t| with x below the turning point: the integral cancels badly, the series does not
  EvalResult ser{0.0, std::numeric_limits<double>::infinity()};
  double mu = 2.0 * std::abs(t.real());
  if (t.imag() == 0.0 && mu >= 1.0 && x <= std::max(mu, 8.0)) {
    ser = k_imag_series(mu, x);
    if (ser.abs_err <= 1e-12 * std::abs(ser.value)) return ser;
  }
  cplx v = cplx(0.0, 2.0) * t;
  CEvalResult I;
  try {
    I = hankel_integral(v, cplx(x, 0.0));
  } catch (const Error& e) {
    if (std::isfinite(ser.abs_err)) return ser;
    throw;
  }
  double pre = std::sqrt(pi / (2.0 * x)) * std::exp(-x);
  cplx K = pre * I.value;
  EvalResult hank{K.real(), pre * I.abs_err + std::abs(K.imag())};
  return ser.abs_err < hank.abs_err ? ser : hank;
}

EvalResult bessel_k_imag(double t, double x) {
  if (std::abs(t) > 100.0) throw Error(ErrorKind::InvalidArgument, "|t| must be <= 100");
  return bessel_k_imag(cplx(t, 0.0), x);
}

namespace {
// K_{2it}(x e^{-i pi/2}) = sqrt(pi/2x) e^{i(x + pi/4)} * hankel(2it, -ix)
CEvalResult k_continued(cplx t, double x) {
  cplx v = cplx(0.0, 2.0) * t;
  auto I = hankel_integral(v, cplx(0.0, -x));
  double s = std::sqrt(pi / (2.0 * x));
  cplx pre = s * std::polar(1.0, x + pi / 4.0);
  return {pre * I.value, s * I.abs_err};
}
}  // namespace

EvalResult bessel_y_pair(cplx t, double x) {
  if (!(x > 0)) throw Error(ErrorKind::InvalidArgument, "x must be > 0");
  auto K = k_continued(t, x);
  cplx ch = std::cosh(pi * t);
  double c = -4.0 / pi * ch.real();
  return {c * K.value.real(), std::abs(c) * K.abs_err + 4 * DBL_EPSILON * std::abs(c * K.value)};
}

EvalResult bessel_y_pair(double t, double x) {
  if (std::abs(t) > 100.0) throw Error(ErrorKind::InvalidArgument, "|t| must be <= 100");
  return bessel_y_pair(cplx(t, 0.0), x);
}

EvalResult voronoi_kernel(const KernelForm& form, int sign, double y) {
  if (!(y > 0)) throw Error(ErrorKind::InvalidArgument, "y must be > 0");
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidArgument, "sign must be +1 or -1");
  double arg = 4.0 * pi * y;
  if (form.kind == KernelForm::Kind::holomorphic) {
    if (sign < 0) return {0.0, 0.0};
    auto J = bessel_j(BesselOrder::integer(form.k - 1), arg);
    return {2.0 * pi * J.value, 2.0 * pi * J.abs_err};
  }
  if (sign > 0) {
    // (pi / cosh pi t)(Y_{2it} + Y_{-2it}) = -4 Re K_{2it}(-ix)
    auto K = k_continued(form.t, arg);
    return {-4.0 * K.value.real(), 4.0 * K.abs_err};
  }
  auto K = bessel_k_imag(form.t, arg);
  double c = 4.0 * std::cosh(pi * form.t).real();
  return {c * K.value, c * K.abs_err};
}

}  // namespace rankinlab
