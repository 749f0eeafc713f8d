#include "rankinlab/transforms.hpp"

#include <cmath>

#include "rankinlab/quad.hpp"
#include "rankinlab/specialfn.hpp"

namespace rankinlab {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

SmoothWindow SmoothWindow::bump(double A, double B, double Z) {
  if (!(0 < A && A < B)) throw Error(ErrorKind::InvalidArgument, "window needs 0 < A < B");
  double tau = (B - A) / (2.0 * std::max(Z, 1.0));
  SmoothWindow w;
  w.A = A;
  w.B = B;
  w.Z = Z;
  w.f = [A, B, tau](double x) { return smooth_step((x - A) / tau) * smooth_step((B - x) / tau); };
  return w;
}

SmoothWindow SmoothWindow::gaussian(double c, double sigma) {
  double A = c - 7.0 * sigma, B = c + 7.0 * sigma;
  if (!(A > 0)) throw Error(ErrorKind::InvalidArgument, "gaussian window must sit in (0, inf)");
  SmoothWindow w;
  w.A = A;
  w.B = B;
  w.Z = c / sigma;
  double tau = 2.0 * sigma;
  w.f = [=](double x) {
    double g = std::exp(-(x - c) * (x - c) / (2.0 * sigma * sigma));
    return g * smooth_step((x - A) / tau) * smooth_step((B - x) / tau);
  };
  return w;
}

SmoothWindow SmoothWindow::zero(double A, double B) {
  SmoothWindow w;
  w.A = A;
  w.B = B;
  w.Z = 0.0;
  w.f = [](double) { return 0.0; };
  return w;
}

SmoothWindow SmoothWindow::combine(double alpha, const SmoothWindow& p, double beta, const SmoothWindow& q) {
  SmoothWindow w;
  w.A = std::min(p.A, q.A);
  w.B = std::max(p.B, q.B);
  w.Z = std::max(p.Z, q.Z);
  w.f = [=](double x) { return alpha * p(x) + beta * q(x); };
  return w;
}

SmoothWindow SmoothWindow::scaled(double s) const {
  SmoothWindow w;
  w.A = A * s;
  w.B = B * s;
  w.Z = Z;
  auto self = *this;
  w.f = [self, s](double x) { return self(x / s); };
  return w;
}

namespace {

QuadConfig quad_cfg(const TransformConfig& cfg, double hint) {
  QuadConfig q;
  q.abs_tol = cfg.abs_tol;
  q.rel_tol = cfg.rel_tol;
  q.refine = cfg.refine;
  q.oscillation_hint = hint;
  q.max_panels = 400000;
  return q;
}

double window_hint(const SmoothWindow& phi) { return (std::max(phi.Z, 1.0) * 2.0) / phi.width(); }

}  // namespace

EvalResult transform_tilde(const SmoothWindow& phi, int l, const TransformConfig& cfg) {
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "l must be >= 1");
  auto order = BesselOrder::integer(l);
  double bessel_err = 0.0;
  auto f = [&](double y) {
    double p = phi(y);
    if (p == 0.0) return 0.0;
    auto J = bessel_j(order, y);
    bessel_err = std::max(bessel_err, J.abs_err * std::abs(p) / y);
    return J.value * p / y;
  };
  auto r = integrate_finite<double>(f, phi.A, phi.B, quad_cfg(cfg, 1.0 / (2.0 * pi) + window_hint(phi)));
  return {r.value, r.abs_err + bessel_err * phi.width()};
}

// phi-hat(t) = -2 int_0^inf cos(2tu) F(cosh u) du with F(w) = int cos(x w) phi(x)/x dx,
// from (J_{2it} - J_{-2it}) / sinh(pi t) = -(4i/pi) int_0^inf cos(x cosh u) cos(2tu) du
EvalResult transform_hat(const SmoothWindow& phi, cplx t, const TransformConfig& cfg) {
  bool imaginary = t.real() == 0.0 && t.imag() != 0.0;
  if (imaginary && !(std::abs(t.imag()) < 0.5)) throw Error(ErrorKind::InvalidArgument, "imaginary t needs |r| < 1/2");
  if (!imaginary && t.imag() != 0.0) throw Error(ErrorKind::InvalidArgument, "t must be real or purely imaginary");
  const double A = phi.A, B = phi.B;
  // inner integrand is smooth and compactly supported, so the trapezoid rule on
  // an equispaced grid converges faster than any power of the step
  auto inner = [&](double step) {
    int n = static_cast<int>(std::ceil((B - A) / step));
    std::vector<double> xs(n + 1), gs(n + 1);
    double h = (B - A) / n;
    for (int i = 0; i <= n; ++i) {
      xs[i] = A + h * i;
      gs[i] = h * phi(xs[i]) / xs[i];
    }
    return std::make_pair(xs, gs);
  };
  // equispaced nodes: cos(x_i w) by complex rotation, re-anchored every 16 steps
  auto eval_F = [](const std::vector<double>& xs, const std::vector<double>& gs, double w) {
    double s = 0.0;
    double h = xs.size() > 1 ? xs[1] - xs[0] : 0.0;
    cplx rot = std::polar(1.0, w * h), cur;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i % 16 == 0) cur = std::polar(1.0, w * xs[i]);
      s += gs[i] * cur.real();
      cur *= rot;
    }
    return s;
  };
  // find where F has decayed below tolerance
  double l1 = 0.0;
  {
    auto [xs, gs] = inner(phi.width() / 256.0);
    for (double g : gs) l1 += std::abs(g);
  }
  // F cannot be resolved below the rounding floor of the phases w x, about eps w B per term
  double tolF = cfg.abs_tol * 1e-2;
  double w_max = 1.0, tail_level = 0.0;
  for (int it = 0;; ++it) {
    if (it == 20) throw Error(ErrorKind::NonConvergence, "phi-hat inner transform does not decay");
    auto [xs, gs] = inner(std::min(phi.width() / 256.0, pi / (4.0 * w_max)));
    double mx = 0.0;
    for (int j = 0; j <= 16; ++j) mx = std::max(mx, std::abs(eval_F(xs, gs, w_max * (1.0 + j / 16.0))));
    double floor = 40.0 * 2.2e-16 * l1 * (1.0 + 2.0 * w_max * B);
    if (mx < std::max(tolF, floor)) {
      tail_level = std::max(mx, tolF);
      break;
    }
    w_max *= 2.0;
  }
  // trapezoid aliasing lands at frequency 2 pi / step - w, kept beyond 3 w_max
  double step = std::min(phi.width() / 256.0, pi / (2.0 * w_max)) / std::max(cfg.refine, 1.0);
  auto [xs, gs] = inner(step);
  auto [xs2, gs2] = inner(step / 2.0);
  double U = std::acosh(std::max(w_max, 1.0 + 1e-9));
  double tr = std::abs(t);
  auto outer = [&](double u) {
    double w = std::cosh(u);
    double c = imaginary ? std::cosh(2.0 * tr * u) : std::cos(2.0 * t.real() * u);
    return -2.0 * c * eval_F(xs, gs, w);
  };
  // local oscillation rate grows like sinh(u); segment so each piece gets its own hint
  EvalResult r{0.0, 0.0};
  const int segs = 16;
  double centre = (A + B) / 2.0;
  for (int j = 0; j < segs; ++j) {
    double u0 = U * j / segs, u1 = U * (j + 1) / segs;
    double hint = (centre * std::sinh(u1) + 2.0 * tr) / (2.0 * pi) + 1.0;
    TransformConfig sub = cfg;
    sub.abs_tol = cfg.abs_tol / segs;
    auto part = integrate_finite<double>(outer, u0, u1, quad_cfg(sub, hint));
    r.value += part.value;
    r.abs_err += part.abs_err;
  }
  double growth = imaginary ? std::cosh(2.0 * tr * U) : 1.0;
  double inner_err = std::abs(eval_F(xs, gs, w_max) - eval_F(xs2, gs2, w_max)) + 1e-15 * phi.width() / A;
  double trunc = 4.0 * tail_level * growth;
  return {r.value, r.abs_err + 2.0 * U * growth * inner_err + trunc};
}

EvalResult transform_check(const SmoothWindow& phi, double t, const TransformConfig& cfg) {
  double kerr = 0.0;
  auto f = [&](double x) {
    double p = phi(x);
    if (p == 0.0) return 0.0;
    auto K = bessel_k_imag(t, x);
    kerr = std::max(kerr, K.abs_err * std::abs(p) / x);
    return K.value * p / x;
  };
  auto r = integrate_finite<double>(f, phi.A, phi.B, quad_cfg(cfg, std::abs(t) / pi + window_hint(phi)));
  double c = 4.0 / pi * std::cosh(pi * t);
  return {c * r.value, c * (r.abs_err + kerr * phi.width())};
}

EvalResult kernel_I(double a, double b, double x, double y, const SmoothWindow& h, int k, int kappa,
                    const TransformConfig& cfg) {
  if (!(a > 0 && b > 0 && x > 0 && y > 0)) throw Error(ErrorKind::InvalidArgument, "a, b, x, y must be positive");
  auto o1 = BesselOrder::integer(k - 1), o2 = BesselOrder::integer(kappa - 1);
  double ax = 4.0 * pi * a * std::sqrt(x), by = 4.0 * pi * b * std::sqrt(y);
  double berr = 0.0;
  auto f = [&](double xi) {
    double hv = h(xi);
    if (hv == 0.0) return 0.0;
    double s = std::sqrt(xi);
    auto J1 = bessel_j(o1, ax * s);
    auto J2 = bessel_j(o2, by * s);
    berr = std::max(berr, std::abs(hv) * (J1.abs_err * std::abs(J2.value) + J2.abs_err * std::abs(J1.value)));
    return hv * J1.value * J2.value;
  };
  double hint = (a * std::sqrt(x) + b * std::sqrt(y)) / std::sqrt(h.A) + window_hint(h);
  auto r = integrate_finite<double>(f, h.A, h.B, quad_cfg(cfg, hint));
  return {r.value, r.abs_err + berr * h.width()};
}

EvalResult kernel_I0_I1(double a, double b, double x, double y, const SmoothWindow& h, double t, int kappa, int which,
                        const TransformConfig& cfg) {
  if (!(a * std::sqrt(x) > 10.0)) throw Error(ErrorKind::InvalidArgument, "kernel_I0_I1 needs a sqrt(x) > 10");
  if (which != 0 && which != 1) throw Error(ErrorKind::InvalidArgument, "which must be 0 or 1");
  auto o2 = BesselOrder::integer(kappa - 1);
  double ax = 4.0 * pi * a * std::sqrt(x), by = 4.0 * pi * b * std::sqrt(y);
  double berr = 0.0;
  auto f = [&](double xi) {
    double hv = h(xi);
    if (hv == 0.0) return 0.0;
    double s = std::sqrt(xi);
    EvalResult K1 = which == 0 ? bessel_y_pair(t, ax * s) : bessel_k_imag(t, ax * s);
    auto J2 = bessel_j(o2, by * s);
    berr = std::max(berr, std::abs(hv) * (K1.abs_err * std::abs(J2.value) + J2.abs_err * std::abs(K1.value)));
    return hv * K1.value * J2.value;
  };
  double hint = (a * std::sqrt(x) * (which == 0 ? 1.0 : 0.0) + b * std::sqrt(y)) / std::sqrt(h.A) + window_hint(h) +
                std::abs(t) / pi;
  auto r = integrate_finite<double>(f, h.A, h.B, quad_cfg(cfg, hint));
  return {r.value, r.abs_err + berr * h.width()};
}

}  // namespace rankinlab
