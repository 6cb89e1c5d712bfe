#include "hka/heatkernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "hka/asymptotics.hpp"
#include "hka/errors.hpp"
#include "hka/specfun.hpp"

namespace hka::heatkernel {

namespace {

constexpr double pi = specfun::pi;

// s / sinh(s), real argument; -> 1 at 0.
double s_over_sinh(double s) {
  if (s == 0.0) return 1.0;
  if (std::abs(s) > 705.0) return 0.0;  // sinh overflows; ratio is below 1e-300
  return s / std::sinh(s);
}

// s coth s, real argument; series below 1e-2, 1 at 0.
double s_coth(double s) {
  double a = std::abs(s);
  if (a < 1e-2) {
    double s2 = s * s;
    return 1.0 + s2 / 3.0 - s2 * s2 / 45.0 + 2.0 * s2 * s2 * s2 / 945.0;
  }
  return s * std::cosh(s) / std::sinh(s);
}

cplx s_coth_c(cplx s) {
  if (std::abs(s) < 1e-2) {
    cplx s2 = s * s;
    return 1.0 + s2 / 3.0 - s2 * s2 / 45.0 + 2.0 * s2 * s2 * s2 / 945.0;
  }
  return s * std::cosh(s) / std::sinh(s);
}

// Window end for the semi-infinite kernel integrals: solve
// rate*S - power*log(S) = margin by fixed point.
double tail_cutoff(double rate, double power, double margin) {
  double s = std::max(margin / rate, 5.0);
  for (int i = 0; i < 8; ++i)
    s = (margin + power * std::log(std::max(s, 2.0))) / rate;
  return std::max(s, 5.0);
}

std::vector<double> panel_edges(double s_max, double max_step) {
  int count = std::max(8, static_cast<int>(std::ceil(s_max / max_step)));
  count = std::min(count, 512);
  std::vector<double> edges(count + 1);
  for (int i = 0; i <= count; ++i) edges[i] = s_max * i / count;
  return edges;
}

double factorial(int k) { return std::tgamma(static_cast<double>(k) + 1.0); }

// Taylor coefficients at 0 of g(w) = ((i pi + w) * w / sinh w)^n * (-1)^n,
// i.e. of (s/sinh s)^n * (s - i pi)^n around the order-n pole at s = i pi.
// Extracted from a circle of radius 1 by the trapezoid rule.
std::vector<cplx> pole_factor_coeffs(int n, int count) {
  const int nodes = 512;
  std::vector<cplx> values(nodes);
  const cplx ipi(0.0, pi);
  for (int k = 0; k < nodes; ++k) {
    double t = 2.0 * pi * k / nodes;
    cplx w = std::polar(1.0, t);
    values[k] = std::pow(-(ipi + w) * w / std::sinh(w), n);
  }
  std::vector<cplx> coeffs(count);
  for (int j = 0; j < count; ++j) {
    cplx sum = 0.0;
    for (int k = 0; k < nodes; ++k) {
      double t = 2.0 * pi * k / nodes;
      sum += values[k] * std::polar(1.0, -j * t);
    }
    coeffs[j] = sum / static_cast<double>(nodes);
  }
  return coeffs;
}

// Line integral along Im s = 3 pi/2 of (s/sinh s)^n exp(i v s - (u/4) s coth s),
// returned with exp(-3 pi v / 2) pulled out into the scale.
ScaledValue line_shift_term(int n, double u, cplx v, const QuadratureConfig& cfg) {
  const double rate = n + 0.25 * u - std::abs(v.imag());
  const double half_len = tail_cutoff(rate, n + 1.0, cfg.truncation_margin + 10.0);
  const cplx iv = cplx(0.0, 1.0) * v;
  auto f = [&](double x) -> cplx {
    cplx s(x, 1.5 * pi);
    cplx base = s / std::sinh(s);
    return std::pow(base, n) * std::exp(iv * cplx(x, 0.0) - 0.25 * u * s_coth_c(s));
  };
  cplx integral = trapezoid_line(f, half_len, 0.25, cfg.rel_tol);
  // exp(i v * (3 pi i / 2)) = exp(-3 pi v / 2)
  cplx phase = std::polar(1.0, -1.5 * pi * v.imag());
  return ScaledValue::from_parts(integral * phase, -1.5 * pi * v.real());
}

// u = 0: the circle around the pole collapses to the exact residue,
// 2 pi i Res = 2 pi i exp(-pi v) sum_k g_k (i v)^{n-1-k} / (n-1-k)!.
ScaledValue residue_term(int n, cplx v) {
  auto g = pole_factor_coeffs(n, n);
  const cplx iv = cplx(0.0, 1.0) * v;
  cplx sum = 0.0;
  for (int k = 0; k < n; ++k)
    sum += g[k] * std::pow(iv, n - 1 - k) / factorial(n - 1 - k);
  cplx mant = cplx(0.0, 2.0 * pi) * sum * std::polar(1.0, -pi * v.imag());
  return ScaledValue::from_parts(mant, -pi * v.real());
}

// u > 0: trapezoid around the circle |s - i pi| = |eps|, with exp(-d^2/4)
// extracted into the scale. The integrand is written through the phase split
// on the circle, so every factor stays O(1).
ScaledValue circle_term(int n, double u, const specfun::SaddleData& sd,
                        const QuadratureConfig& cfg) {
  const cplx eps = sd.eps;
  const cplx z = 0.5 * pi * u / eps;
  auto f = [&](double phi) -> cplx {
    cplx xi = eps * std::polar(1.0, phi);
    return asymptotics::s_factor(n, xi) *
           std::exp(asymptotics::remainder_r(u, eps, xi) - z * (1.0 - std::cos(phi))) *
           std::polar(1.0, (1.0 - n) * phi);
  };
  cplx integral = trapezoid_periodic(f, 512, cfg.rel_tol);
  // pi^n * eps^{1-n} with the magnitude of the power folded into the scale
  ScaledValue eps_pow = ScaledValue::from_parts(
      std::polar(1.0, (1.0 - n) * std::arg(eps)), (1.0 - n) * std::log(std::abs(eps)));
  ScaledValue head = ScaledValue::from_parts(
      integral * std::pow(pi, n) * std::polar(1.0, -0.25 * sd.d_squared.imag()),
      -0.25 * sd.d_squared.real());
  return head * eps_pow;
}

struct StencilCache {
  std::map<double, double> log_values;  // v -> log p(v)
  std::function<double(double)> eval_log;
  double at(double v) {
    auto it = log_values.find(v);
    if (it != log_values.end()) return it->second;
    double r = eval_log(v);
    log_values.emplace(v, r);
    return r;
  }
};

}  // namespace

void validate(const KernelParams& p) {
  if (p.n < 1) throw DomainError("kernel: n must be >= 1");
  if (p.m < 1) throw DomainError("kernel: m must be >= 1");
  if (!(p.u >= 0.0)) throw DomainError("kernel: u must be >= 0");
  if (p.v.imag() != 0.0) {
    if (p.m != 1) throw DomainError("kernel: complex v requires m = 1");
    if (std::abs(p.v.imag()) >= strip_half_width)
      throw DomainError("kernel: Im v outside the analyticity strip");
  }
}

ScaledValue p_bessel_integral(const KernelParams& p, const QuadratureConfig& cfg,
                              bool unbounded_v) {
  validate(p);
  hka::validate(cfg);
  if (p.v.imag() != 0.0)
    throw DomainError("p_bessel_integral: requires real v");
  const double v = p.v.real();
  if (v < 0.0) throw DomainError("p_bessel_integral: v must be >= 0");
  if (!unbounded_v && v > direct_v_max)
    throw DomainError("p_bessel_integral: v exceeds the direct-route limit");

  const int n = p.n, m = p.m;
  const double u = p.u;
  const double nu = 0.5 * (m - 2);
  const double rate = n + 0.25 * u;
  const double s_max = tail_cutoff(rate, n + m, cfg.truncation_margin);
  const double osc_step = (v > 1.0) ? pi / v : 1.0;
  auto f = [&](double s) -> double {
    double body = std::pow(s_over_sinh(s), n) * std::exp(-0.25 * u * s_coth(s));
    double power = (m == 1) ? 1.0 : std::pow(s, m - 1);
    return power * body * specfun::norm_bessel_j(nu, s * v);
  };
  QuadratureConfig qc = cfg;
  qc.max_panels = std::max(qc.max_panels, 4000);
  double integral = integrate_adaptive(f, panel_edges(s_max, std::min(1.0, osc_step)), qc);
  double pref = 2.0 * std::pow(4.0 * pi, -(n + 0.5 * m));
  return ScaledValue::from(pref * integral);
}

ScaledValue p_cosine_integral(int n, double u, cplx v, const QuadratureConfig& cfg) {
  KernelParams p{n, 1, u, v};
  validate(p);
  hka::validate(cfg);
  const double rate = n + 0.25 * u - std::abs(v.imag());
  const double s_max = tail_cutoff(rate, n + 1.0, cfg.truncation_margin);
  const double av = std::abs(v.real());
  const double osc_step = (av > 1.0) ? pi / av : 1.0;
  auto f = [&](double s) -> cplx {
    double body = std::pow(s_over_sinh(s), n) * std::exp(-0.25 * u * s_coth(s));
    return body * std::cos(v * cplx(s, 0.0));
  };
  QuadratureConfig qc = cfg;
  qc.max_panels = std::max(qc.max_panels, 4000);
  cplx integral = integrate_adaptive(f, panel_edges(s_max, std::min(1.0, osc_step)), qc);
  double pref = 2.0 * std::pow(4.0 * pi, -(n + 0.5)) / std::sqrt(pi);
  return ScaledValue::from(pref * integral);
}

ContourTerms p_contour_terms(int n, double u, cplx v, const QuadratureConfig& cfg) {
  KernelParams p{n, 1, u, v};
  validate(p);
  hka::validate(cfg);
  if (!(v.real() >= contour_v_min))
    throw DomainError("p_contour: requires Re v >= 4");

  // The contour identity is exact for any circle radius below pi/2, so the
  // saddle solve may run on a wider window than the asymptotic formulas use.
  // Radius 10 still gives the pole-growth Newton seed quadratic convergence.
  static const specfun::InverseBranchWindow contour_window{
      10.0, specfun::pi / 8.0, 0.75, specfun::pi / 16.0};

  ContourTerms terms;
  terms.line_term = line_shift_term(n, u, v, cfg);
  if (u == 0.0) {
    terms.circle_term = residue_term(n, v);
  } else {
    auto sd = specfun::saddle_data(u, v, contour_window);  // DomainError off-window
    terms.circle_term = circle_term(n, u, sd, cfg);
  }
  double pref = std::pow(4.0 * pi, -(n + 0.5)) / std::sqrt(pi);
  terms.line_term = terms.line_term * pref;
  terms.circle_term = terms.circle_term * pref;
  terms.total = terms.line_term + terms.circle_term;
  return terms;
}

ScaledValue p_contour(int n, double u, cplx v, const QuadratureConfig& cfg) {
  return p_contour_terms(n, u, v, cfg).total;
}

ScaledValue derive_m_plus_2(int n, int m, double u, double v,
                            const QuadratureConfig& cfg, double step) {
  if (!(v > 0.0)) throw DomainError("derive_m_plus_2: requires v > 0");
  double h = (step > 0.0) ? step : std::max(1e-3, 1e-2 / v);
  if (v <= 4.0 * h)
    throw DomainError("derive_m_plus_2: v too small for the difference stencil");

  // One route for the whole stencil, chosen at the center, so the function
  // being differenced is smooth.
  Route route = (v + 2.0 * h <= direct_v_max) ? Route::direct : Route::contour;
  if (route == Route::contour && m != 1) route = Route::automatic;

  QuadratureConfig inner = cfg;
  inner.rel_tol = std::min(cfg.rel_tol, 1e-10);

  StencilCache cache;
  cache.eval_log = [&](double vv) {
    return kernel_value(n, m, u, vv, inner, route).log_abs();
  };

  auto dlog = [&](double hh) {
    return (-cache.at(v + 2.0 * hh) + 8.0 * cache.at(v + hh) - 8.0 * cache.at(v - hh) +
            cache.at(v - 2.0 * hh)) /
           (12.0 * hh);
  };
  double d1 = dlog(h);
  double d2 = dlog(0.5 * h);
  double extrapolated = (16.0 * d2 - d1) / 15.0;
  double trunc = std::abs(d2 - d1) / 15.0;
  if (trunc > std::max(1e-6, 10.0 * cfg.rel_tol) * std::abs(extrapolated))
    throw ConvergenceError("derive_m_plus_2: difference step too large");

  ScaledValue center = kernel_value(n, m, u, v, inner, route);
  return center * (-extrapolated / (2.0 * pi * v));
}

ScaledValue integrate_from_m_plus_1(int n, int m, double u, double v,
                           const QuadratureConfig& cfg) {
  if (!(v > 0.0)) throw DomainError("integrate_from_m_plus_1: requires v > 0");
  KernelParams base{n, m, u, v};
  validate(base);

  QuadratureConfig inner = cfg;
  inner.rel_tol = std::min(cfg.rel_tol, 1e-10);

  auto inner_log = [&](double hh) -> double {
    if (hh <= direct_v_max)
      return kernel_value(n, m + 1, u, hh, inner, Route::direct).log_abs();
    if (m + 1 == 1 || (m + 1) % 2 == 1)
      return kernel_value(n, m + 1, u, hh, inner, Route::automatic).log_abs();
    // Even inner index past the cancellation wall: direct quadrature at the
    // absolute roundoff floor. The tail it feeds is many e-folds below the
    // peak, so the floor noise is harmless in the final value.
    KernelParams q{n, m + 1, u, cplx(hh, 0.0)};
    return p_bessel_integral(q, inner, true).log_abs();
  };

  const double w_max = std::acosh(1.0 + cfg.truncation_margin / (pi * v)) + 0.5;
  const double log0 = inner_log(v);
  auto f = [&](double w) -> double {
    double hh = v * std::cosh(w);
    double lg = inner_log(hh);
    if (!std::isfinite(lg)) return 0.0;
    return v * std::cosh(w) * std::exp(lg - log0);
  };
  QuadratureConfig qc = cfg;
  qc.abs_floor = std::max(qc.abs_floor, std::log(1e-14));
  double integral = integrate_adaptive(f, {0.0, 0.25 * w_max, w_max}, qc);
  return ScaledValue::from_parts(2.0 * integral, log0);
}

ScaledValue kernel_value(int n, int m, double u, double v,
                         const QuadratureConfig& cfg, Route route) {
  KernelParams p{n, m, u, cplx(v, 0.0)};
  validate(p);
  if (v < 0.0) throw DomainError("kernel: v must be >= 0");

  switch (route) {
    case Route::direct:
      return p_direct(p, cfg);
    case Route::contour:
      if (m != 1) throw DomainError("kernel: contour route requires m = 1");
      return p_contour(n, u, cplx(v, 0.0), cfg);
    case Route::automatic:
      break;
  }
  if (v <= direct_v_max) return p_direct(p, cfg);
  if (m == 1) return p_contour(n, u, cplx(v, 0.0), cfg);
  if (m % 2 == 1) return derive_m_plus_2(n, m - 2, u, v, cfg);
  return integrate_from_m_plus_1(n, m, u, v, cfg);
}

ScaledValue p_direct(const KernelParams& p, const QuadratureConfig& cfg) {
  validate(p);
  if (p.v.real() < 0.0) throw DomainError("p_direct: v must be >= 0");
  if (p.v.real() > direct_v_max)
    throw DomainError(
        "p_direct: |v| exceeds the direct-route limit (oscillatory cancellation); "
        "use the contour route");
  if (p.m == 1) return p_cosine_integral(p.n, p.u, p.v, cfg);
  return p_bessel_integral(p, cfg);
}

ScaledValue heat_kernel(double z_sq, double t_abs, double h, int n, int m,
                        const QuadratureConfig& cfg) {
  if (!(h > 0.0)) throw DomainError("heat_kernel: requires h > 0");
  if (z_sq < 0.0 || t_abs < 0.0)
    throw DomainError("heat_kernel: requires nonnegative z_sq and t_abs");
  ScaledValue reduced = kernel_value(n, m, z_sq / h, t_abs / h, cfg);
  return reduced.scaled_by_exp(-(n + m) * std::log(h));
}

}  // namespace hka::heatkernel
