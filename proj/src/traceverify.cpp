#include "rankinlab/traceverify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>

#include "rankinlab/arith.hpp"
#include "rankinlab/parallel.hpp"
#include "rankinlab/quad.hpp"
#include "rankinlab/specialfn.hpp"

namespace rankinlab {

// --- Petersson

namespace {

// Weil times the J_{k-1} envelope, summed over c > c_max
double petersson_tail(std::int64_t m, std::int64_t n, int k, std::int64_t c_max) {
  double g = static_cast<double>(gcd64(m, n));
  double mn = static_cast<double>(m) * static_cast<double>(n);
  double logt = std::log(2.0 * pi * 2.0 * std::sqrt(g)) + (k - 1) * std::log(2.0 * pi * std::sqrt(mn)) -
                std::lgamma(static_cast<double>(k)) - (k - 2) * std::log(static_cast<double>(c_max)) -
                std::log(k - 2.0);
  return std::exp(logt);
}

}  // namespace

EvalResult petersson_geometric_R(std::int64_t m, std::int64_t n, int k, std::int64_t M, std::int64_t c_max,
                                 double tail_tol) {
  if (k < 4 || k % 2) throw Error(ErrorKind::InvalidArgument, "k must be even >= 4");
  if (m < 1 || n < 1 || M < 1 || c_max < 1) throw Error(ErrorKind::InvalidArgument, "m, n, M, c_max must be >= 1");
  double tail = petersson_tail(m, n, k, c_max);
  if (tail > tail_tol)
    throw Error(ErrorKind::TruncationTooShort,
                "Petersson tail bound " + std::to_string(tail) + " exceeds tolerance at c_max = " + std::to_string(c_max));
  auto order = BesselOrder::integer(k - 1);
  double x0 = 4.0 * pi * std::sqrt(static_cast<double>(m) * static_cast<double>(n));
  double s = 0.0, err = 0.0;
  for (std::int64_t c = M; c <= c_max; c += M) {
    auto K = kloosterman(n, m, c);
    if (K.value == 0.0 && K.residual_imag == 0.0) continue;
    auto J = bessel_j(order, x0 / static_cast<double>(c));
    s += K.value * J.value / static_cast<double>(c);
    err += (std::abs(K.value) * J.abs_err + (K.residual_imag + 1e-13 * std::abs(K.value) + 1e-13) * std::abs(J.value)) /
           static_cast<double>(c);
  }
  // i^{-k} = +-1 for even k
  double phase = (k % 4 == 0) ? 1.0 : -1.0;
  double delta = (m == n) ? 1.0 : 0.0;
  return {delta + 2.0 * pi * phase * s, 2.0 * pi * err + tail};
}

Rank1Report petersson_rank1_check(const CuspForm& f, int grid, std::int64_t c_max) {
  if (f.kind != CuspForm::Kind::holomorphic) throw Error(ErrorKind::InvalidArgument, "rank-1 check needs a holomorphic form");
  static const int one_dim[] = {12, 16, 18, 20, 22, 26};
  if (f.level != 1 || std::find(std::begin(one_dim), std::end(one_dim), f.weight) == std::end(one_dim))
    throw Error(ErrorKind::InvalidArgument, "rank-1 check needs level 1 and dim S_k(1) = 1");
  if (grid < 1) throw Error(ErrorKind::InvalidArgument, "grid must be >= 1");
  f.require(grid, "petersson_rank1_check");
  Rank1Report rep;
  const std::size_t G = static_cast<std::size_t>(grid);
  rep.R.assign(G * G, 0.0);
  std::vector<double> errs(G * G, 0.0);
  std::vector<std::pair<int, int>> pairs;
  for (int m = 1; m <= grid; ++m)
    for (int n = m; n <= grid; ++n) pairs.emplace_back(m, n);
  parallel_for(pairs.size(), [&](std::size_t i) {
    auto [m, n] = pairs[i];
    auto r = petersson_geometric_R(m, n, f.weight, 1, c_max, 1e-3);
    rep.R[(m - 1) * G + (n - 1)] = rep.R[(n - 1) * G + (m - 1)] = r.value;
    errs[(m - 1) * G + (n - 1)] = errs[(n - 1) * G + (m - 1)] = r.abs_err;
  });
  auto R = [&](int m, int n) { return rep.R[(m - 1) * G + (n - 1)]; };
  rep.R11 = R(1, 1);
  for (double e : errs) rep.max_abs_err = std::max(rep.max_abs_err, e);
  for (int m = 1; m <= grid; ++m)
    for (int n = 1; n <= grid; ++n) {
      double d1 = std::abs(R(m, n) * R(1, 1) - R(m, 1) * R(1, n));
      double d2 = std::abs(R(m, n) / R(1, 1) - f.lambda[m] * f.lambda[n]);
      if (d1 > rep.max_factor_defect || d2 > rep.max_lambda_defect) {
        rep.worst_m = m;
        rep.worst_n = n;
      }
      rep.max_factor_defect = std::max(rep.max_factor_defect, d1);
      rep.max_lambda_defect = std::max(rep.max_lambda_defect, d2);
    }
  return rep;
}

// --- Voronoi

CEvalResult voronoi_lhs(const CuspForm& f, std::int64_t a, std::int64_t q, const SmoothWindow& h) {
  if (q < 1 || gcd64(a, q) != 1) throw Error(ErrorKind::InvalidArgument, "need q >= 1 and (a, q) = 1");
  auto lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(h.A)));
  auto hi = static_cast<std::int64_t>(std::floor(h.B));
  if (hi < lo) return {0.0, 0.0};
  f.require(hi, "voronoi_lhs");
  const auto& roots = roots_of_unity(q);
  std::int64_t ar = mod_reduce(a, q);
  cplx s = 0.0;
  double mag = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n) {
    double w = f.lambda[n] / std::sqrt(static_cast<double>(n)) * h(static_cast<double>(n));
    s += w * roots[mul_mod(n % q, ar, q)];
    mag += std::abs(w);
  }
  return {s, 4e-16 * mag};
}

CEvalResult voronoi_rhs(const CuspForm& f, std::int64_t a, std::int64_t q, const SmoothWindow& h, std::int64_t n_max,
                        double tol) {
  if (q < 1 || gcd64(a, q) != 1) throw Error(ErrorKind::InvalidArgument, "need q >= 1 and (a, q) = 1");
  for (const auto& pp : factorize(f.level))
    if (pp.e > 1) throw Error(ErrorKind::InvalidArgument, "Voronoi needs squarefree level");
  std::int64_t N2 = f.level / gcd64(f.level, q);
  double eta = 1.0;
  if (N2 != 1) {
    auto it = f.atkin_lehner.find(N2);
    if (it == f.atkin_lehner.end())
      throw Error(ErrorKind::MissingAtkinLehner, "no Atkin-Lehner eigenvalue for N2 = " + std::to_string(N2));
    eta = it->second;
  }
  KernelForm kf;
  double eta_plus, eta_minus;
  if (f.kind == CuspForm::Kind::holomorphic) {
    kf = KernelForm::holomorphic(f.weight);
    double ik = (f.weight % 4 == 0) ? 1.0 : -1.0;
    eta_plus = eta_minus = ik * eta;
  } else {
    if (!f.reflection) throw Error(ErrorKind::InvalidArgument, "Maass form needs its reflection eigenvalue");
    kf = KernelForm::maass(cplx(f.spectral, 0.0));
    eta_plus = eta;
    eta_minus = *f.reflection * eta;
  }
  const bool has_minus = f.kind == CuspForm::Kind::maass;
  std::int64_t abar = mod_inverse(mod_reduce(a, q) * (N2 % q) % q, q);
  const auto& roots = roots_of_unity(q);
  double scale = static_cast<double>(q) * static_cast<double>(q) * static_cast<double>(N2);

  // the dual integral depends on n only through beta = sqrt(n / (q^2 N2)):
  // G(beta) = int h(xi^2 / beta^2) J(xi) dxi, tabulated by piecewise Chebyshev interpolation
  auto G_direct = [&](double beta, int sign) -> EvalResult {
    double xa = beta * std::sqrt(h.A), xb = beta * std::sqrt(h.B);
    double kerr = 0.0;
    auto g = [&](double xi) {
      double hv = h(xi * xi / (beta * beta));
      if (hv == 0.0) return 0.0;
      auto J = voronoi_kernel(kf, sign, xi);
      kerr = std::max(kerr, std::abs(hv) * J.abs_err);
      return hv * J.value;
    };
    QuadConfig qc;
    // the kernel carries ~1e-13 absolute noise, which caps the attainable accuracy
    qc.abs_tol = std::max(tol * 1e-3, 1e-13 * 2.0 * pi * (xb - xa));
    qc.rel_tol = 1e-11;
    // about one starting panel per four kernel cycles; adaptive splitting refines where needed
    qc.oscillation_hint = 0.125 + 0.125 * std::max(h.Z, 1.0) / (xb - xa);
    auto r = integrate_finite<double>(g, xa, xb, qc);
    return {r.value, r.abs_err + kerr * (xb - xa)};
  };
  // a half period of the kernel oscillation in beta
  const double cell = 1.0 / (4.0 * std::sqrt(h.B));
  constexpr int nodes = 16;
  struct Cell {
    std::array<double, nodes> coef{};
    double err = 0.0;
  };
  std::map<std::pair<std::int64_t, int>, Cell> table;
  auto G = [&](double beta, int sign) -> EvalResult {
    // tabulate only where enough dual terms share a cell to pay for the nodes
    if (2.0 * beta * scale * cell < 2.0 * nodes) return G_direct(beta, sign);
    auto idx = static_cast<std::int64_t>(std::floor(beta / cell));
    auto key = std::make_pair(idx, sign);
    auto it = table.find(key);
    if (it == table.end()) {
      Cell c;
      std::array<double, nodes> fv{};
      double lo = idx * cell;
      for (int j = 0; j < nodes; ++j) {
        double t = std::cos(pi * (j + 0.5) / nodes);
        double b = lo + cell * (t + 1.0) / 2.0;
        auto r = b > 0 ? G_direct(b, sign) : EvalResult{0.0, 0.0};
        fv[j] = r.value;
        c.err = std::max(c.err, r.abs_err);
      }
      for (int k = 0; k < nodes; ++k) {
        double s = 0.0;
        for (int j = 0; j < nodes; ++j) s += fv[j] * std::cos(pi * k * (j + 0.5) / nodes);
        c.coef[k] = s * (k == 0 ? 1.0 : 2.0) / nodes;
      }
      // interpolation error from the decay of the last coefficients
      c.err += 2.0 * (std::abs(c.coef[nodes - 1]) + std::abs(c.coef[nodes - 2])) + 1e-15 * std::abs(c.coef[0]) * nodes;
      it = table.emplace(key, c).first;
    }
    const Cell& c = it->second;
    double t = 2.0 * (beta - idx * cell) / cell - 1.0;
    // Clenshaw
    double b1 = 0.0, b2 = 0.0;
    for (int k = nodes - 1; k >= 1; --k) {
      double b0 = 2.0 * t * b1 - b2 + c.coef[k];
      b2 = b1;
      b1 = b0;
    }
    return {t * b1 - b2 + c.coef[0], c.err};
  };
  auto dual_integral = [&](std::int64_t n, int sign) { return G(std::sqrt(n / scale), sign); };

  const bool adaptive = n_max <= 0;
  std::int64_t limit = adaptive ? f.n_max() : n_max;
  if (!adaptive) f.require(n_max, "voronoi_rhs");
  // the dual integrals are negligible until 4 pi xi reaches the Bessel transition
  std::int64_t n_min_check = static_cast<std::int64_t>(4.0 * scale / h.A) + 64;
  cplx sum = 0.0;
  double err = 0.0, block_max = 0.0;
  std::int64_t next_check = 64;
  bool done = false;
  std::int64_t n = 1;
  for (; n <= limit; ++n) {
    double c = f.lambda[n] / std::sqrt(static_cast<double>(n));
    auto Ip = dual_integral(n, +1);
    cplx term = eta_plus * Ip.value * roots[mod_reduce(-mul_mod(n % q, abar, q), q)];
    double terr = Ip.abs_err;
    if (has_minus) {
      auto Im = dual_integral(n, -1);
      term += eta_minus * Im.value * roots[mul_mod(n % q, abar, q)];
      terr += Im.abs_err;
    }
    term *= 2.0 * c;
    sum += term;
    err += 2.0 * std::abs(c) * terr;
    block_max = std::max(block_max, std::abs(term));
    if (n == next_check) {
      if (n >= n_min_check && block_max * static_cast<double>(n) < tol) {
        err += block_max * static_cast<double>(n);
        done = true;
        if (adaptive) break;
      }
      block_max = 0.0;
      next_check *= 2;
    }
  }
  if (!adaptive && !done) {
    // fixed length: judge the last half-block directly
    std::int64_t lo = std::max<std::int64_t>(1, n_max / 2);
    double mx = 0.0;
    for (std::int64_t j = std::max(lo, n_max - 8); j <= n_max; ++j) {
      double c = f.lambda[j] / std::sqrt(static_cast<double>(j));
      mx = std::max(mx, std::abs(2.0 * c * dual_integral(j, +1).value));
      if (has_minus) mx = std::max(mx, std::abs(2.0 * c * dual_integral(j, -1).value));
    }
    if (n_max < n_min_check || mx * static_cast<double>(n_max) > tol)
      throw Error(ErrorKind::TruncationTooShort, "Voronoi dual sum not converged at n_max = " + std::to_string(n_max));
    err += mx * static_cast<double>(n_max);
    done = true;
  }
  if (!done)
    throw Error(ErrorKind::TruncationTooShort,
                "Voronoi dual sum not converged within " + std::to_string(limit) + " coefficients");
  return {sum, err};
}

// --- Jutila

Rational StepFunction::integral() const {
  Rational s = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) s += values[i] * (breakpoints[i + 1] - breakpoints[i]);
  return s;
}

double StepFunction::operator()(double x) const {
  if (breakpoints.empty()) return 0.0;
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x,
                             [](double v, const Rational& b) { return v < static_cast<double>(b); });
  if (it == breakpoints.begin() || it == breakpoints.end()) return 0.0;
  return static_cast<double>(values[static_cast<std::size_t>(it - breakpoints.begin()) - 1]);
}

StepFunction jutila_build(const std::vector<std::int64_t>& Q_set, const Rational& delta) {
  if (Q_set.empty()) throw Error(ErrorKind::EmptyModuli, "Jutila construction needs at least one modulus");
  if (delta <= 0) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  std::vector<std::pair<Rational, int>> events;
  std::int64_t Lambda = 0;
  for (auto q : Q_set) {
    if (q < 1) throw Error(ErrorKind::InvalidArgument, "moduli must be positive");
    for (std::int64_t a = 0; a < q; ++a) {
      if (gcd64(a, q) != 1) continue;
      Rational c(a, q);
      events.emplace_back(c - delta, +1);
      events.emplace_back(c + delta, -1);
      ++Lambda;
    }
  }
  std::sort(events.begin(), events.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  StepFunction out;
  out.delta = delta;
  out.Lambda = Lambda;
  out.raw_endpoints = static_cast<std::int64_t>(events.size());
  Rational norm = 1 / (2 * delta * Lambda);
  std::int64_t level = 0;
  for (std::size_t i = 0; i < events.size();) {
    std::size_t j = i;
    while (j < events.size() && events[j].first == events[i].first) level += events[j++].second;
    out.breakpoints.push_back(events[i].first);
    out.values.push_back(norm * level);
    i = j;
  }
  out.values.pop_back();  // level after the last endpoint is zero
  return out;
}

Rational jutila_l2_error(const StepFunction& I) {
  std::vector<Rational> pts = I.breakpoints;
  pts.push_back(0);
  pts.push_back(1);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Rational total = 0;
  std::size_t k = 0;  // index into I.breakpoints
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Rational& x0 = pts[i];
    while (k < I.breakpoints.size() && I.breakpoints[k] <= x0) ++k;
    Rational iv = 0;
    if (k >= 1 && k < I.breakpoints.size()) iv = I.values[k - 1];
    Rational ind = (x0 >= 0 && x0 < 1) ? Rational(1) : Rational(0);
    Rational d = ind - iv;
    total += d * d * (pts[i + 1] - x0);
  }
  return total;
}

double jutila_bound(double Q, const StepFunction& I) {
  double L = static_cast<double>(I.Lambda);
  return 10.0 * Q * Q / (static_cast<double>(I.delta) * L * L);
}

std::vector<std::int64_t> jutila_moduli(std::int64_t Q) {
  std::vector<std::int64_t> v;
  for (std::int64_t q = Q + 1; q <= 2 * Q; ++q) v.push_back(q);
  return v;
}

Rational dyadic_rational(double x) {
  const double scale = std::ldexp(1.0, 40);
  auto num = static_cast<std::int64_t>(std::llround(x * scale));
  return Rational(num, static_cast<std::int64_t>(1) << 40);
}

double w_delta(double shift, double delta) {
  if (!(delta > 0)) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  // extended precision keeps the phase error below the final rounding for large shifts
  const long double z = 6.283185307179586476925286766559L * static_cast<long double>(delta) * shift;
  if (std::fabs(z) < 1e-4L) return static_cast<double>(1.0L - z * z / 6.0L + z * z * z * z / 120.0L);
  return static_cast<double>(std::sin(z) / z);
}

// --- shifted convolution

double shifted_sum_A(const CuspForm& f, const CuspForm& g, std::int64_t l1, std::int64_t l2, std::int64_t v,
                     double x) {
  if (l1 < 1 || l2 < 1) throw Error(ErrorKind::InvalidArgument, "l1, l2 must be >= 1");
  if (x < 1) return 0.0;
  auto mx = static_cast<std::int64_t>(std::floor(x));
  f.require(mx, "shifted_sum_A");
  double s = 0.0;
  for (std::int64_t m = 1; m <= mx; ++m) {
    std::int64_t t = l1 * m - v;
    if (t <= 0 || t % l2 != 0) continue;
    std::int64_t n = t / l2;
    g.require(n, "shifted_sum_A");
    s += f.lambda[m] * g.lambda[n] / std::sqrt(static_cast<double>(m) * static_cast<double>(n));
  }
  return s;
}

// --- large sieve

namespace {

std::int64_t ceil_i(double x) { return static_cast<std::int64_t>(std::ceil(x - 1e-12)); }
std::int64_t floor_i(double x) { return static_cast<std::int64_t>(std::floor(x + 1e-12)); }

}  // namespace

std::int64_t SieveInstance::v_lo() const { return std::max<std::int64_t>(1, ceil_i(V)); }
std::int64_t SieveInstance::v_hi() const { return floor_i(2 * V); }
std::int64_t SieveInstance::h_lo() const { return std::max<std::int64_t>(1, ceil_i(H)); }
std::int64_t SieveInstance::h_hi() const { return floor_i(2 * H); }
std::int64_t SieveInstance::d_lo() const { return std::max<std::int64_t>(1, ceil_i(D)); }
std::int64_t SieveInstance::d_hi() const { return floor_i(2 * D); }
std::int64_t SieveInstance::q_lo() const { return std::max<std::int64_t>(1, ceil_i(Q)); }
std::int64_t SieveInstance::q_hi() const { return floor_i(2 * Q); }

double SieveInstance::uV(double v) const { return SmoothWindow::bump(V, 2 * V, Z)(v); }
double SieveInstance::uH(double h) const { return SmoothWindow::bump(H, 2 * H, Z)(h); }
double SieveInstance::uQ(double q) const { return SmoothWindow::bump(Q, 2 * Q, Z)(q); }
double SieveInstance::uD(double d) const { return SmoothWindow::bump(D, 2 * D, Z)(d); }

void SieveInstance::validate() const {
  if (r < 1 || s < 1 || w < 1) throw Error(ErrorKind::InvalidArgument, "r, s, w must be positive");
  if (gcd64(r, s) != 1) throw Error(ErrorKind::InvalidArgument, "need (r, s) = 1");
  if (gcd64(w, r * s) != 1) throw Error(ErrorKind::InvalidArgument, "need (w, rs) = 1");
  if (!(V > 0 && H > 0 && Q > 0 && D > 0 && Z > 0)) throw Error(ErrorKind::InvalidArgument, "ranges must be positive");
  std::size_t nv = static_cast<std::size_t>(std::max<std::int64_t>(0, v_hi() - v_lo() + 1));
  std::size_t nh = static_cast<std::size_t>(std::max<std::int64_t>(0, h_hi() - h_lo() + 1));
  std::size_t nd = static_cast<std::size_t>(std::max<std::int64_t>(0, d_hi() - d_lo() + 1));
  if (a.size() != nv || b.size() != nh) throw Error(ErrorKind::InvalidArgument, "coefficient tables do not match the box");
  for (const auto& row : b)
    if (row.size() != nd) throw Error(ErrorKind::InvalidArgument, "coefficient tables do not match the box");
}

void SieveInstance::resize_tables() {
  a.assign(static_cast<std::size_t>(std::max<std::int64_t>(0, v_hi() - v_lo() + 1)), 0.0);
  b.assign(static_cast<std::size_t>(std::max<std::int64_t>(0, h_hi() - h_lo() + 1)),
           std::vector<cplx>(static_cast<std::size_t>(std::max<std::int64_t>(0, d_hi() - d_lo() + 1)), 0.0));
}

// S(v rbar, +-hw; c) = sum_alpha e((+-hw alpha + v rbar alphabar)/c), so the quadruple sum factors as
// sum_alpha A(rbar alphabar) B(+-w alpha) with A, B the additive twists of the weighted coefficients
CEvalResult large_sieve_lhs(const SieveInstance& inst, int sign) {
  inst.validate();
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidArgument, "sign must be +1 or -1");
  std::vector<std::pair<std::int64_t, cplx>> av, bh;
  for (std::int64_t v = inst.v_lo(); v <= inst.v_hi(); ++v) {
    cplx x = inst.a[v - inst.v_lo()] * inst.uV(static_cast<double>(v));
    if (x != 0.0) av.emplace_back(v, x);
  }
  for (std::int64_t h = inst.h_lo(); h <= inst.h_hi(); ++h) {
    double uh = inst.uH(static_cast<double>(h));
    if (uh == 0.0) continue;
    cplx x = 0.0;
    for (std::int64_t d = inst.d_lo(); d <= inst.d_hi(); ++d)
      x += inst.b[h - inst.h_lo()][d - inst.d_lo()] * inst.uD(static_cast<double>(d));
    if (x != 0.0) bh.emplace_back(h, x * uh);
  }
  std::vector<std::int64_t> qs;
  for (std::int64_t q = inst.q_lo(); q <= inst.q_hi(); ++q)
    if (gcd64(q, inst.r) == 1 && inst.uQ(static_cast<double>(q)) != 0.0) qs.push_back(q);
  std::vector<cplx> part(qs.size());
  std::vector<double> mag(qs.size());
  parallel_for(qs.size(), [&](std::size_t i) {
    std::int64_t q = qs[i], c = inst.s * q;
    const auto& roots = roots_of_unity(c);
    auto twist = [&](const std::vector<std::pair<std::int64_t, cplx>>& xs) {
      std::vector<cplx> T(static_cast<std::size_t>(c), 0.0);
      for (std::int64_t beta = 0; beta < c; ++beta) {
        cplx s = 0.0;
        for (const auto& [v, x] : xs) s += x * roots[mul_mod(v % c, beta, c)];
        T[beta] = s;
      }
      return T;
    };
    auto A = twist(av), B = twist(bh);
    std::int64_t rbar = mod_inverse(mod_reduce(inst.r, c), c);
    std::int64_t wr = mod_reduce(sign * inst.w, c);
    cplx s = 0.0;
    double m = 0.0;
    for (std::int64_t al = 0; al < c; ++al) {
      if (gcd64(al, c) != 1) continue;
      std::int64_t albar = mod_inverse(al, c);
      cplx t = A[mul_mod(rbar, albar, c)] * B[mul_mod(wr, al, c)];
      s += t;
      m += std::abs(t);
    }
    double uq = inst.uQ(static_cast<double>(q)) / static_cast<double>(q);
    part[i] = s * uq;
    mag[i] = m * uq;
  });
  cplx total = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    total += part[i];
    err += mag[i];
  }
  return {total, 1e-13 * err + 1e-300};
}

SieveInstance random_sieve_instance(std::uint64_t seed, double Q, double Z, std::int64_t rsw_max, double VH_max) {
  if (rsw_max < 1 || !(VH_max >= 1) || !(Q > 0) || !(Z > 0))
    throw Error(ErrorKind::InvalidArgument, "random_sieve_instance: bad ranges");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> pick(1, rsw_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SieveInstance inst;
  do {
    inst.r = pick(rng);
    inst.s = pick(rng);
    inst.w = pick(rng);
  } while (gcd64(inst.r, inst.s) != 1 || gcd64(inst.w, inst.r * inst.s) != 1);
  inst.V = std::exp(unit(rng) * std::log(VH_max));
  inst.H = std::exp(unit(rng) * std::log(VH_max));
  inst.D = std::exp(unit(rng) * std::log(20.0));
  inst.Q = Q;
  inst.Z = Z;
  inst.resize_tables();
  for (auto& x : inst.a) x = cplx(gauss(rng), gauss(rng));
  for (auto& row : inst.b)
    for (auto& x : row) x = cplx(gauss(rng), gauss(rng));
  return inst;
}

double large_sieve_bound(const SieveInstance& inst, double theta) {
  if (!(theta >= 0 && theta <= 0.5)) throw Error(ErrorKind::InvalidArgument, "theta must lie in [0, 1/2]");
  double r = static_cast<double>(inst.r), s = static_cast<double>(inst.s), w = static_cast<double>(inst.w);
  double Z = inst.Z;
  double Xi = std::sqrt(inst.V * inst.H * w) / (s * std::sqrt(r) * inst.Q);
  double a2 = 0.0;
  for (const auto& x : inst.a) a2 += std::norm(x);
  double B2 = 0.0;
  for (const auto& row : inst.b) {
    double Bh = 0.0;
    for (const auto& x : row) Bh += std::abs(x);
    B2 += Bh * Bh;
  }
  double rs = r * s;
  return s * std::sqrt(r) * ((1.0 + std::pow(Xi / Z, -2.0 * theta)) / (Z + Xi)) *
         (Z + Xi + std::sqrt(inst.V / rs)) * (Z + Xi + std::sqrt(inst.H / rs)) * std::pow(w, theta) *
         std::sqrt(a2) * std::sqrt(B2) * (1.0 + std::pow(Z, 8.0));
}

// --- cusp-pair Kloosterman identity

SSSReport sss_check(std::int64_t m, std::int64_t n, std::int64_t r, std::int64_t s, std::int64_t C_max) {
  if (r < 1 || s < 1 || C_max < 1 || gcd64(r, s) != 1)
    throw Error(ErrorKind::InvalidArgument, "need r, s, C_max >= 1 and (r, s) = 1");
  SSSReport rep;
  std::int64_t sbar = r == 1 ? 0 : mod_inverse(mod_reduce(s, r), r);
  for (std::int64_t C = 1; C <= C_max; ++C) {
    if (gcd64(C, r) != 1) continue;
    std::int64_t sc = s * C, rsc = r * s * C;
    std::int64_t rbar = mod_inverse(mod_reduce(r, sc), sc);
    cplx lead = roots_of_unity(r)[mul_mod(mod_reduce(n, r), sbar, r)];
    cplx direct = lead * kloosterman_direct(mul_mod(mod_reduce(m, sc), rbar, sc), n, sc).value;
    // bottom-left entries delta mod rsC with delta = C mod r and (delta, sC) = 1
    const auto& roots = roots_of_unity(rsc);
    cplx def = 0.0;
    for (std::int64_t d = C % r; d < rsc; d += r) {
      if (gcd64(d, sc) != 1) continue;
      std::int64_t dbar = mod_inverse(d, sc);
      std::int64_t num = mod_reduce(mul_mod(mod_reduce(m, rsc), mul_mod(dbar, r, rsc), rsc) + mul_mod(mod_reduce(n, rsc), d, rsc), rsc);
      def += roots[num];
    }
    double w = 1.0 / (static_cast<double>(s) * std::sqrt(static_cast<double>(r)) * static_cast<double>(C));
    rep.direct += w * direct;
    rep.definition += w * def;
    rep.max_term_diff = std::max(rep.max_term_diff, w * std::abs(direct - def));
    ++rep.terms;
  }
  return rep;
}

}  // namespace rankinlab
