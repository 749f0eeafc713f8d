#pragma once

#include "rankinlab/common.hpp"

namespace rankinlab {

struct BesselOrder {
  enum class Kind { integer, real, imaginary };
  Kind kind = Kind::integer;
  double value = 0.0;  // integer order, real order, or t for order 2it

  static BesselOrder integer(int n);
  static BesselOrder real(double v);
  static BesselOrder imaginary(double t, double t_max = 100.0);
  cplx order() const;  // the actual order (2it for imaginary kind)
};

EvalResult bessel_j(const BesselOrder& order, double x);

// individual evaluation paths, exposed for cross-checks
EvalResult bessel_j_taylor(double v, double x);
EvalResult bessel_j_phase(double v, double x);
EvalResult bessel_j_recurrence(int n, double x);

enum class WMethod { quadrature, series, automatic };

// W_v(x) with J_v(x) = e^{ix} W_v(x) + e^{-ix} conj(W_v(x)) for real v
CEvalResult phase_w(const BesselOrder& order, double x, WMethod method = WMethod::quadrature);

// (1/Gamma(v+1/2)) int_0^inf e^{-u} u^{v-1/2} (1 + u/(2z))^{v-1/2} du, Re z >= 0, Re v > -1/2
CEvalResult hankel_integral(cplx v, cplx z, WMethod method = WMethod::automatic, double refine = 1.0);

EvalResult bessel_k_imag(double t, double x);
EvalResult bessel_y_pair(double t, double x);
// complex t covers the small-imaginary (exceptional) spectral parameters t = ir, r < 1/4
EvalResult bessel_k_imag(cplx t, double x);
EvalResult bessel_y_pair(cplx t, double x);

struct KernelForm {
  enum class Kind { holomorphic, maass } kind = Kind::holomorphic;
  int k = 12;
  cplx t{0.0, 0.0};
  static KernelForm holomorphic(int k);
  static KernelForm maass(cplx t);
};

EvalResult voronoi_kernel(const KernelForm& form, int sign, double y);

cplx log_gamma(cplx z);

}  // namespace rankinlab
