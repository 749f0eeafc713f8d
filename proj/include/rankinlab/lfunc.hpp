#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "rankinlab/common.hpp"
#include "rankinlab/forms.hpp"
#include "rankinlab/transforms.hpp"

namespace rankinlab {

struct RankinSelbergPair {
  std::shared_ptr<const CuspForm> f, g;
  std::int64_t conductor = 1;
  std::array<cplx, 4> mu_inf{};
  std::optional<cplx> eps_phase;
};

std::int64_t conductor(const CuspForm& f, const CuspForm& g);
// Gamma_R shifts of L_infinity(s, f x g)
std::array<cplx, 4> archimedean_mu(const CuspForm& f, const CuspForm& g);
RankinSelbergPair make_rs_pair(std::shared_ptr<const CuspForm> f, std::shared_ptr<const CuspForm> g,
                            std::optional<cplx> eps_phase = std::nullopt);

double q_inf(cplx s, const RankinSelbergPair& pair);
cplx log_L_inf(cplx s, const RankinSelbergPair& pair);

// b(n), n = 1..n_max (index 0 unused)
std::vector<double> rs_dirichlet_coeffs(const RankinSelbergPair& pair, std::int64_t n_max);

struct AFEConfig {
  int A0 = 4;
  double contour_height = 0.0;           // max |Im u|; 0 = where the integrand envelope drops below abs_tol
  std::int64_t truncation_length = 100000;  // Euler-product prime cutoff
  double abs_tol = 1e-13;
  double refine = 1.0;
};

CEvalResult afe_weight_V(cplx s, double y, const RankinSelbergPair& pair, const AFEConfig& cfg = {});
cplx afe_G(cplx u, int A0);

double smoothed_pair_sum(const CuspForm& f, const CuspForm& g, const SmoothWindow& h, double X);

struct MomentResult {
  double value = 0.0;
  double diagonal = 0.0;
  double truncation_error = 0.0;
  double abs_err = 0.0;  // truncation plus Bessel/rounding
};

MomentResult second_moment_geometric(const CuspForm& f, int kappa, std::int64_t M, const SmoothWindow& h, double X,
                                     std::int64_t c_max, double tail_tol = 1e-6);

inline constexpr double thm1_beta = 11.0 / 4875.0;
double thm1_bound(double M, double N, double X, double Z_h, double eps);

// j-th derivative at s0 via the Cauchy integral over |s - s0| = radius
cplx contour_derivative(const std::function<cplx(cplx)>& F, cplx s0, int j, double radius, int samples = 64);

}  // namespace rankinlab
