#pragma once

#include <complex>

#include "hka/quadrature.hpp"
#include "hka/scaled_value.hpp"

namespace hka::heatkernel {

using cplx = std::complex<double>;

// Reduced heat-kernel parameters: n is the half horizontal dimension, m the
// center dimension, u = |z|^2/h, v = |t|/h. Complex v is meaningful only for
// m = 1, inside the analyticity strip |Im v| < strip_half_width.
struct KernelParams {
  int n = 1;
  int m = 1;
  double u = 0.0;
  cplx v = 0.0;
};

inline constexpr double direct_v_max = 8.0;      // cancellation wall of the direct route
inline constexpr double contour_v_min = 4.0;     // shifted-contour route needs Re v >= this
inline constexpr double strip_half_width = 0.2;  // |Im v| bound for complex v

void validate(const KernelParams& p);

enum class Route { automatic, direct, contour };

// Direct quadrature of the kernel integral, any m >= 1, real v in [0,
// direct_v_max]. For m = 1 this dispatches to the full-line (cosine) form;
// otherwise to the Bessel form.
ScaledValue p_direct(const KernelParams& p, const QuadratureConfig& cfg = {});

// Bessel-kernel form: semi-infinite integral with the normalized Bessel
// factor. Real v >= 0. Set unbounded_v to evaluate past the cancellation wall
// and accept the absolute roundoff floor (used for integral tails whose
// contribution is far below the final value).
ScaledValue p_bessel_integral(const KernelParams& p, const QuadratureConfig& cfg = {},
                              bool unbounded_v = false);

// Full-line (cosine-transform) form, m = 1 only; even in v, complex v allowed
// inside the strip.
ScaledValue p_cosine_integral(int n, double u, cplx v, const QuadratureConfig& cfg = {});

// Shifted-contour evaluation for m = 1 and large Re v: a line integral pushed
// past the first pole of the integrand plus a small circle around it. The
// circle term carries exp(-d^2/4) in its log scale; for u = 0 it collapses to
// the exact residue, a polynomial in v times exp(-pi v).
struct ContourTerms {
  ScaledValue line_term;
  ScaledValue circle_term;
  ScaledValue total;
};
ContourTerms p_contour_terms(int n, double u, cplx v, const QuadratureConfig& cfg = {});
ScaledValue p_contour(int n, double u, cplx v, const QuadratureConfig& cfg = {});

// p(n, m+2; u, v) = -(2 pi v)^{-1} d/dv p(n, m; u, v), with the derivative
// taken in log space by 4th-order central differences and Richardson
// verification. step = 0 picks the default step.
ScaledValue derive_m_plus_2(int n, int m, double u, double v,
                            const QuadratureConfig& cfg = {}, double step = 0.0);

// p(n, m; u, v) = 2 int_v^inf h (h^2-v^2)^{-1/2} p(n, m+1; u, h) dh, with the
// substitution h = v cosh w removing the endpoint singularity.
ScaledValue integrate_from_m_plus_1(int n, int m, double u, double v,
                           const QuadratureConfig& cfg = {});

// Best-route evaluation: direct below the cancellation wall; above it the
// contour route for m = 1, the derivative recurrence for odd m, and the
// square-root integral recurrence for even m.
ScaledValue kernel_value(int n, int m, double u, double v,
                         const QuadratureConfig& cfg = {},
                         Route route = Route::automatic);

// Physical kernel through the scaling identity:
// p_h(z, t) = h^{-(n+m)} p(n, m; |z|^2/h, |t|/h).
ScaledValue heat_kernel(double z_sq, double t_abs, double h, int n, int m,
                        const QuadratureConfig& cfg = {});

}  // namespace hka::heatkernel
