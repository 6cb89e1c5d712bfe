#pragma once

#include <complex>
#include <vector>

#include "hka/quadrature.hpp"
#include "hka/scaled_value.hpp"

namespace hka::asymptotics {

using cplx = std::complex<double>;

// Closed-form large-v approximation, kept factored so the recomposition can
// be checked exactly: value = prefactor * exp(exp_log) * bessel_part.
struct AsymptoticApprox {
  enum class Regime { u_zero, u_positive };
  ScaledValue value;
  double prefactor = 0.0;   // 2^{-2n-(m-1)/2} v^{-(m-1)/2}
  cplx exp_log = 0.0;       // -d^2(u,v)/4
  ScaledValue bessel_part;  // eps^{1-n} exp(-pi u/(2 eps)) I_{n-1}(pi u/(2 eps))
  Regime regime = Regime::u_positive;
};

// Large-v closed form for u > 0 (requires 4v/u inside the inverse branch
// window).
AsymptoticApprox q_closed_form(int n, int m, double u, double v);

// Leading large-v term for u = 0: a constant times v^{n-k-1} e^{-pi v} for
// odd m = 2k+1, and sqrt(2) times v^{n-k-1/2} e^{-pi v} for even m = 2k.
ScaledValue b_asymp(int n, int m, double v);
// Same value packaged with the factored form (trivial Bessel part).
AsymptoticApprox b_asymp_approx(int n, int m, double v);

// Side-by-side table of the kernel against its closed-form approximation, the
// numerical witness of the "(1 + o(1))" statements.
struct RatioRow {
  double v = 0.0;
  ScaledValue p;
  ScaledValue q;
  double ratio = 0.0;
  double abs_dev = 0.0;
};
std::vector<RatioRow> ratio_table(int n, int m, double u,
                                  const std::vector<double>& v_grid,
                                  const QuadratureConfig& cfg = {});

// Kernel phase phi(u, v; s) = i v s - (u/4) s coth s and its s-derivative.
// At the saddle s = i theta, phi = -d^2(u,v)/4 and phi' = 0.
cplx saddle_phi(double u, cplx v, cplx s);
cplx saddle_phi_prime(double u, cplx v, cplx s);

// G(u; xi) = (u/4) (pi (cot xi - 1/xi) - xi cot xi): the analytic-at-zero
// part of the phase on the vertical line s = i(pi - xi).
cplx g_function(double u, cplx xi);
cplx g_function_prime(double u, cplx xi);

// Taylor remainder of G about eps: G(xi) - G(eps) - G'(eps)(xi - eps).
cplx remainder_r(double u, cplx eps, cplx xi);

// S(n; xi) = [xi/sin(xi) * (1 - xi/pi)]^n, the regular factor of the kernel
// integrand on the circle around the pole; S(n; 0) = 1.
cplx s_factor(int n, cplx xi);

struct SaddleDiagnostics {
  cplx phi_at_saddle;
  double phi_prime_norm = 0.0;
  cplx d_sq_over_4;
  cplx g_value;                       // G(u; eps)
  double decomposition_residual = 0.0;  // phase split on the vertical line
  double saddle_relation_residual = 0.0;  // |v - (pi u/(4 eps^2) - G'(eps))| / |v|
  double remainder_sup = 0.0;         // sup_phi |R(u, eps; eps e^{i phi})|
  double bound_constant = 0.0;        // sup_phi |R| / (u |eps|^2 (1 - cos phi))
};
SaddleDiagnostics saddle_diagnostics(double u, double v);

}  // namespace hka::asymptotics
