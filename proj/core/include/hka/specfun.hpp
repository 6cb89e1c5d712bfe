#pragma once

#include <complex>

#include "hka/quadrature.hpp"
#include "hka/scaled_value.hpp"

namespace hka::specfun {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Domain window for the inverse branch of mu near pi. The forward map sends
// {|x| > r0, |arg x| < eta0} into {|pi - w| < r0_prime, |arg(pi - w)| <
// eta0_prime}. These bounds are configuration, not derived constants.
struct InverseBranchWindow {
  double r0 = 100.0;
  double eta0 = pi / 8.0;
  double r0_prime = 0.5;
  double eta0_prime = pi / 16.0;
};
inline constexpr InverseBranchWindow default_branch_window{};

double gamma_fn(double x);  // Gamma(x), x > 0

// Bessel J_nu(x) for nu >= -1/2, x >= 0.
double bessel_j(double nu, double x);

// (x/2)^{-nu} J_nu(x): entire and even in x, value 1/Gamma(nu+1) at x = 0.
double norm_bessel_j(double nu, double x);

// exp(-z) I_nu(z) for Re z >= 0, nu > -1/2. Small |z| is evaluated by
// quadrature of the finite integral representation, large |z| by the
// normalized asymptotic series; the switchover is cross-validated in tests.
ScaledValue bessel_i_scaled(double nu, cplx z);
inline constexpr double bessel_i_switchover = 30.0;

// mu(w) = (2w - sin 2w) / (2 sin^2 w); meromorphic, odd, with double poles at
// nonzero multiples of pi and a removable singularity at 0.
cplx mu(cplx w);
cplx mu_prime(cplx w);

// mu(pi - eps) evaluated in the offset variable. Near the pole the offset
// carries the precision; forming pi - eps as a double first would quantize it
// at ulp(pi) and cost relative accuracy proportional to sqrt(|mu|).
cplx mu_at_offset(cplx eps);

// Inverse of mu near pi: theta with mu(theta) = x, for x in the branch
// window's input sector. Newton in the offset eps = pi - theta, seeded from
// the pole-type growth mu ~ pi/(pi - w)^2.
cplx mu_inverse(cplx x, const InverseBranchWindow& win = default_branch_window);
// Same solve, returning eps = pi - theta at full relative precision.
cplx mu_inverse_offset(cplx x, const InverseBranchWindow& win = default_branch_window);

// Real increasing branch: theta in [0, pi) with mu(theta) = y, y >= 0.
double mu_inverse_real(double y);

// Carnot-Caratheodory distance squared from the origin, reduced coordinates:
// (theta/sin theta)^2 * z_sq with theta = mu^{-1}(4 t / z_sq), or 4 pi t when
// z_sq = 0.
double cc_distance_squared(double z_sq, double t_abs);

// Complexified saddle data for the kernel phase: theta = mu^{-1}(4v/u),
// eps = pi - theta, d^2 = (theta/sin theta)^2 u, and the analytic derivative
// d(d^2)/dv = 4 theta.
struct SaddleData {
  cplx theta;
  cplx eps;
  cplx d_squared;
  double u;
  cplx v;
  cplx d_squared_dv;
};
SaddleData saddle_data(double u, cplx v,
                       const InverseBranchWindow& win = default_branch_window);

}  // namespace hka::specfun
