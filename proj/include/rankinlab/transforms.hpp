#pragma once

#include <functional>

#include "rankinlab/common.hpp"

namespace rankinlab {

// Smooth compactly supported weight on [A, B] with derivative scale Z.
struct SmoothWindow {
  double A = 1.0, B = 2.0;
  double Z = 1.0;
  std::function<double(double)> f;
  std::function<double(double, int)> deriv;  // optional analytic derivatives

  double operator()(double x) const { return (x <= A || x >= B) ? 0.0 : f(x); }
  double width() const { return B - A; }

  // smooth plateau: rises over (B-A)/(2 max(Z,1)) at each end; Z <= 1 gives a single bump
  static SmoothWindow bump(double A, double B, double Z = 1.0);
  // Gaussian of width sigma centred at c, cut off smoothly at c +- 7 sigma
  static SmoothWindow gaussian(double c, double sigma);
  static SmoothWindow zero(double A, double B);
  static SmoothWindow combine(double alpha, const SmoothWindow& p, double beta, const SmoothWindow& q);
  SmoothWindow scaled(double s) const;  // x -> phi(x / s), support s*[A, B]
};

// 0 for t <= 0, 1 for t >= 1, C-infinity in between
double smooth_step(double t);

struct TransformConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double refine = 1.0;
};

EvalResult transform_tilde(const SmoothWindow& phi, int l, const TransformConfig& cfg = {});
// t real, or t = i r with 0 < r < 1/2
EvalResult transform_hat(const SmoothWindow& phi, cplx t, const TransformConfig& cfg = {});
EvalResult transform_check(const SmoothWindow& phi, double t, const TransformConfig& cfg = {});

EvalResult kernel_I(double a, double b, double x, double y, const SmoothWindow& h, int k, int kappa,
                    const TransformConfig& cfg = {});
EvalResult kernel_I0_I1(double a, double b, double x, double y, const SmoothWindow& h, double t, int kappa, int which,
                        const TransformConfig& cfg = {});

}  // namespace rankinlab
