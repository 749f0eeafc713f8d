#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "rankinlab/common.hpp"

namespace rankinlab {

struct QuadConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  int max_panels = 200000;
  double oscillation_hint = 0.0;  // cycles per unit length
  double refine = 1.0;            // multiplies the initial panel count
};

// declared bound |f(x)| <= C * exp(-rate x) or C * x^(-rate) past the truncation point
struct DecayEnvelope {
  enum class Kind { none, exponential, algebraic } kind = Kind::none;
  double C = 1.0;
  double rate = 1.0;
};

struct Domain {
  double a = 0.0;
  double b = 1.0;  // may be +infinity when envelope is declared
  DecayEnvelope envelope{};
};

namespace detail {

struct GaussLegendre {
  static constexpr int N = 16;
  std::array<double, N> x{}, w{};
  GaussLegendre() {
    for (int i = 0; i < N; ++i) {
      double z = std::cos(pi * (i + 0.75) / (N + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= N; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        double dp = N * (z * p0 - p1) / (z * z - 1.0);
        double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) {
          x[i] = z;
          w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
          break;
        }
        if (it == 99) {
          x[i] = z;
          w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
      }
    }
  }
};

inline const GaussLegendre& gauss_legendre() {
  static const GaussLegendre gl;
  return gl;
}

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const cplx& v) { return std::abs(v); }

template <class T, class F>
void gl_panel(const F& f, double a, double b, T& sum, double& abs_sum) {
  const auto& gl = gauss_legendre();
  double h = 0.5 * (b - a), c = 0.5 * (a + b);
  sum = T{};
  abs_sum = 0.0;
  for (int i = 0; i < GaussLegendre::N; ++i) {
    T v = f(c + h * gl.x[i]);
    sum += gl.w[i] * h * v;
    abs_sum += gl.w[i] * std::abs(h) * magnitude(v);
  }
}

}  // namespace detail

template <class T>
struct QuadOutcome {
  T value{};
  double abs_err = 0.0;
  int panels = 0;
};

// Adaptive 16-point Gauss-Legendre panels on [a, b]. Each panel is compared
// against its two halves; the worst panel is split until the summed
// differences meet the tolerance. Returns the fine-level sum.
template <class T, class F>
QuadOutcome<T> integrate_finite(const F& f, double a, double b, const QuadConfig& cfg) {
  QuadOutcome<T> out;
  if (!(b > a)) return out;
  struct Panel {
    double a, b;
    T whole, left, right;
    double abs_left, abs_right, err;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  auto make = [&](double pa, double pb, const T& whole) {
    Panel p{pa, pb, whole, T{}, T{}, 0.0, 0.0, 0.0};
    double m = 0.5 * (pa + pb);
    detail::gl_panel<T>(f, pa, m, p.left, p.abs_left);
    detail::gl_panel<T>(f, m, pb, p.right, p.abs_right);
    p.err = detail::magnitude(p.left + p.right - p.whole);
    return p;
  };
  double width = b - a;
  double hint = cfg.oscillation_hint;
  long n0 = 1;
  if (hint > 0) n0 = static_cast<long>(std::ceil(width * 4.0 * hint));
  n0 = std::max<long>(1, static_cast<long>(std::ceil(n0 * std::max(cfg.refine, 1.0))));
  if (cfg.refine > 1.0 && hint <= 0) n0 = static_cast<long>(std::ceil(cfg.refine));
  if (n0 > cfg.max_panels) throw Error(ErrorKind::NonConvergence, "initial panel count exceeds max_panels");
  std::priority_queue<Panel> pq;
  T total{};
  double err = 0.0, abs_total = 0.0;
  for (long i = 0; i < n0; ++i) {
    double pa = a + width * static_cast<double>(i) / n0;
    double pb = (i + 1 == n0) ? b : a + width * static_cast<double>(i + 1) / n0;
    T whole;
    double ab;
    detail::gl_panel<T>(f, pa, pb, whole, ab);
    Panel p = make(pa, pb, whole);
    total += p.left + p.right;
    err += p.err;
    abs_total += p.abs_left + p.abs_right;
    pq.push(p);
  }
  long panels = n0;
  const double eps = std::numeric_limits<double>::epsilon();
  while (true) {
    double tol = std::max(cfg.abs_tol, cfg.rel_tol * detail::magnitude(total));
    if (err <= tol || err <= 50.0 * eps * abs_total) break;
    if (panels >= cfg.max_panels) throw Error(ErrorKind::NonConvergence, "max_panels reached");
    Panel p = pq.top();
    pq.pop();
    double m = 0.5 * (p.a + p.b);
    Panel l = make(p.a, m, p.left), r = make(m, p.b, p.right);
    total += (l.left + l.right + r.left + r.right) - (p.left + p.right);
    err += l.err + r.err - p.err;
    abs_total += l.abs_left + l.abs_right + r.abs_left + r.abs_right - p.abs_left - p.abs_right;
    pq.push(l);
    pq.push(r);
    ++panels;
  }
  // recompute from the panel set to drop accumulated update round-off
  T sum{};
  double e2 = 0.0, ab2 = 0.0;
  std::vector<Panel> all;
  all.reserve(pq.size());
  while (!pq.empty()) {
    all.push_back(pq.top());
    pq.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& p : all) {
    sum += p.left + p.right;
    e2 += p.err;
    ab2 += p.abs_left + p.abs_right;
  }
  out.value = sum;
  out.abs_err = e2 + 50.0 * eps * ab2;
  out.panels = static_cast<int>(panels);
  return out;
}

// Fixed composite rule with a given number of equal panels; deterministic node
// set, used where smooth dependence on parameters matters (finite differences).
template <class T, class F>
T integrate_fixed(const F& f, double a, double b, int panels) {
  T sum{};
  for (int i = 0; i < panels; ++i) {
    double pa = a + (b - a) * i / panels, pb = a + (b - a) * (i + 1) / panels;
    T s;
    double ab;
    detail::gl_panel<T>(f, pa, pb, s, ab);
    sum += s;
  }
  return sum;
}

double envelope_cutoff(const Domain& d, double tol);
double envelope_tail(const Domain& d, double cutoff);

template <class T, class F>
QuadOutcome<T> integrate_domain(const F& f, const Domain& d, const QuadConfig& cfg) {
  if (std::isfinite(d.b)) return integrate_finite<T>(f, d.a, d.b, cfg);
  if (d.envelope.kind == DecayEnvelope::Kind::none)
    throw Error(ErrorKind::InvalidArgument, "infinite domain needs a decay envelope");
  double T_cut = envelope_cutoff(d, cfg.abs_tol / 10.0);
  auto r = integrate_finite<T>(f, d.a, T_cut, cfg);
  r.abs_err += envelope_tail(d, T_cut);
  return r;
}

EvalResult integrate(const std::function<double(double)>& f, const Domain& d, const QuadConfig& cfg);
CEvalResult integrate_complex(const std::function<cplx(double)>& f, const Domain& d, const QuadConfig& cfg);

}  // namespace rankinlab
