#include "hka/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "hka/errors.hpp"
#include "hka/heatkernel.hpp"
#include "hka/specfun.hpp"

namespace hka::asymptotics {

namespace {

constexpr double pi = specfun::pi;

// s coth s and its derivative, with short series below 1e-2.
cplx s_coth(cplx s) {
  if (std::abs(s) < 1e-2) {
    cplx s2 = s * s;
    return 1.0 + s2 / 3.0 - s2 * s2 / 45.0 + 2.0 * s2 * s2 * s2 / 945.0;
  }
  cplx sh = std::sinh(s);
  cplx value = s * std::cosh(s) / sh;
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw DomainError("saddle_phi: pole at a nonzero multiple of i pi");
  return value;
}

cplx s_coth_prime(cplx s) {
  if (std::abs(s) < 1e-2) {
    cplx s2 = s * s;
    return s * (2.0 / 3.0 - 4.0 * s2 / 45.0 + 4.0 * s2 * s2 / 315.0);
  }
  cplx sh = std::sinh(s);
  cplx value = std::cosh(s) / sh - s / (sh * sh);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw DomainError("saddle_phi: pole at a nonzero multiple of i pi");
  return value;
}

}  // namespace

AsymptoticApprox q_closed_form(int n, int m, double u, double v) {
  if (n < 1 || m < 1) throw DomainError("q_closed_form: n, m must be >= 1");
  if (!(u > 0.0)) throw DomainError("q_closed_form: requires u > 0 (use b_asymp at u = 0)");

  auto sd = specfun::saddle_data(u, cplx(v, 0.0));
  AsymptoticApprox a;
  a.regime = AsymptoticApprox::Regime::u_positive;
  a.prefactor = std::pow(2.0, -2.0 * n - 0.5 * (m - 1)) * std::pow(v, -0.5 * (m - 1));
  a.exp_log = -0.25 * sd.d_squared;

  cplx z = 0.5 * pi * u / sd.eps;
  ScaledValue eps_pow = ScaledValue::from_parts(
      std::polar(1.0, (1.0 - n) * std::arg(sd.eps)),
      (1.0 - n) * std::log(std::abs(sd.eps)));
  a.bessel_part = eps_pow * specfun::bessel_i_scaled(n - 1, z);
  a.value = ScaledValue::from(a.prefactor) * ScaledValue::exponential(a.exp_log) *
            a.bessel_part;
  return a;
}

ScaledValue b_asymp(int n, int m, double v) {
  if (n < 1 || m < 1) throw DomainError("b_asymp: n, m must be >= 1");
  if (!(v > 0.0)) throw DomainError("b_asymp: requires v > 0");
  double coeff, power;
  if (m % 2 == 1) {
    int k = (m - 1) / 2;
    coeff = 1.0 / (std::pow(2.0, k) * std::pow(4.0, n) * std::tgamma(n));
    power = n - k - 1.0;
  } else {
    int k = m / 2;
    coeff = std::sqrt(2.0) / (std::pow(2.0, k) * std::pow(4.0, n) * std::tgamma(n));
    power = n - k - 0.5;
  }
  return ScaledValue::from_parts(coeff, power * std::log(v) - pi * v);
}

AsymptoticApprox b_asymp_approx(int n, int m, double v) {
  AsymptoticApprox a;
  a.regime = AsymptoticApprox::Regime::u_zero;
  a.value = b_asymp(n, m, v);
  double k_half = (m % 2 == 1) ? (m - 1) / 2 : m / 2;
  double power = (m % 2 == 1) ? n - k_half - 1.0 : n - k_half - 0.5;
  double coeff = ((m % 2 == 1) ? 1.0 : std::sqrt(2.0)) /
                 (std::pow(2.0, k_half) * std::pow(4.0, n) * std::tgamma(n));
  a.prefactor = coeff * std::pow(v, power);
  a.exp_log = -pi * v;
  a.bessel_part = ScaledValue::from(1.0);
  return a;
}

std::vector<RatioRow> ratio_table(int n, int m, double u,
                                  const std::vector<double>& v_grid,
                                  const QuadratureConfig& cfg) {
  if (v_grid.empty()) throw DomainError("ratio_table: empty grid");
  for (std::size_t i = 0; i + 1 < v_grid.size(); ++i)
    if (!(v_grid[i] < v_grid[i + 1]))
      throw DomainError("ratio_table: v grid must be strictly increasing");

  std::vector<RatioRow> rows;
  rows.reserve(v_grid.size());
  for (double v : v_grid) {
    RatioRow row;
    row.v = v;
    row.p = heatkernel::kernel_value(n, m, u, v, cfg);
    row.q = (u == 0.0) ? b_asymp_approx(n, m, v).value : q_closed_form(n, m, u, v).value;
    row.ratio = ScaledValue::ratio(row.p, row.q).real();
    row.abs_dev = std::abs(row.ratio - 1.0);
    rows.push_back(row);
  }
  return rows;
}

cplx saddle_phi(double u, cplx v, cplx s) {
  return cplx(0.0, 1.0) * v * s - 0.25 * u * s_coth(s);
}

cplx saddle_phi_prime(double u, cplx v, cplx s) {
  return cplx(0.0, 1.0) * v - 0.25 * u * s_coth_prime(s);
}

cplx g_function(double u, cplx xi) {
  if (std::abs(xi) < 0.1) {
    cplx x2 = xi * xi;
    // cot(xi) - 1/xi and xi cot(xi) by series
    cplx cot_m = -xi * (1.0 / 3.0 + x2 / 45.0 + 2.0 * x2 * x2 / 945.0 +
                        x2 * x2 * x2 / 4725.0);
    cplx xcot = 1.0 - x2 / 3.0 - x2 * x2 / 45.0 - 2.0 * x2 * x2 * x2 / 945.0 -
                x2 * x2 * x2 * x2 / 4725.0;
    return 0.25 * u * (pi * cot_m - xcot);
  }
  cplx s = std::sin(xi);
  cplx c = std::cos(xi);
  cplx value = 0.25 * u * (pi * (c / s - 1.0 / xi) - xi * c / s);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw DomainError("g_function: pole at a nonzero multiple of pi");
  return value;
}

cplx g_function_prime(double u, cplx xi) {
  if (std::abs(xi) < 0.1) {
    cplx x2 = xi * xi;
    // pi (1/xi^2 - csc^2 xi) -> -pi (1/3 + xi^2/15 + 2 xi^4/189 + xi^6/675)
    cplx a = -(1.0 / 3.0 + x2 / 15.0 + 2.0 * x2 * x2 / 189.0 + x2 * x2 * x2 / 675.0);
    // xi csc^2 xi - cot xi = (2/3) xi + (4/45) xi^3 + (4/315) xi^5 + ...
    cplx b = xi * (2.0 / 3.0 + 4.0 * x2 / 45.0 + 4.0 * x2 * x2 / 315.0 +
                   8.0 * x2 * x2 * x2 / 4725.0);
    return 0.25 * u * (pi * a + b);
  }
  cplx s = std::sin(xi);
  cplx csc2 = 1.0 / (s * s);
  cplx value = 0.25 * u * (pi * (1.0 / (xi * xi) - csc2) - std::cos(xi) / s + xi * csc2);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw DomainError("g_function_prime: pole at a nonzero multiple of pi");
  return value;
}

cplx remainder_r(double u, cplx eps, cplx xi) {
  return g_function(u, xi) - g_function(u, eps) - g_function_prime(u, eps) * (xi - eps);
}

cplx s_factor(int n, cplx xi) {
  if (n < 1) throw DomainError("s_factor: n must be >= 1");
  cplx base;
  if (std::abs(xi) < 1e-2) {
    cplx x2 = xi * xi;
    cplx xi_over_sin = 1.0 + x2 / 6.0 + 7.0 * x2 * x2 / 360.0 + 31.0 * x2 * x2 * x2 / 15120.0;
    base = xi_over_sin * (1.0 - xi / pi);
  } else {
    base = xi / std::sin(xi) * (1.0 - xi / pi);
    if (!std::isfinite(base.real()) || !std::isfinite(base.imag()))
      throw DomainError("s_factor: pole at a nonzero multiple of pi");
  }
  cplx out = 1.0;
  for (int i = 0; i < n; ++i) out *= base;
  return out;
}

SaddleDiagnostics saddle_diagnostics(double u, double v) {
  if (!(u > 0.0)) throw DomainError("saddle_diagnostics: requires u > 0");
  auto sd = specfun::saddle_data(u, cplx(v, 0.0));
  const cplx i_theta = cplx(0.0, 1.0) * sd.theta;

  SaddleDiagnostics d;
  d.phi_at_saddle = saddle_phi(u, v, i_theta);
  d.phi_prime_norm = std::abs(saddle_phi_prime(u, v, i_theta));
  d.d_sq_over_4 = 0.25 * sd.d_squared;
  d.g_value = g_function(u, sd.eps);

  // Phase split on the vertical line through the pole, probed at a few
  // offsets around |eps|.
  double worst = 0.0;
  for (double scale : {0.5, 1.0, 2.0}) {
    for (double ang : {-0.3, 0.0, 0.4}) {
      cplx xi = sd.eps * scale * std::polar(1.0, ang);
      cplx lhs = saddle_phi(u, v, cplx(0.0, 1.0) * (pi - xi));
      cplx rhs = -(pi - xi) * v + 0.25 * pi * u / xi + g_function(u, xi);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }
  d.decomposition_residual = worst;

  cplx v_back = 0.25 * pi * u / (sd.eps * sd.eps) - g_function_prime(u, sd.eps);
  d.saddle_relation_residual = std::abs(cplx(v, 0.0) - v_back) / std::abs(v);

  double sup_r = 0.0, sup_c = 0.0;
  const int samples = 256;
  for (int j = 1; j <= samples; ++j) {
    double phi = pi * j / samples;
    cplx xi = sd.eps * std::polar(1.0, phi);
    double r = std::abs(remainder_r(u, sd.eps, xi));
    sup_r = std::max(sup_r, r);
    double denom = u * std::norm(sd.eps) * (1.0 - std::cos(phi));
    if (denom > 0.0) sup_c = std::max(sup_c, r / denom);
  }
  d.remainder_sup = sup_r;
  d.bound_constant = sup_c;
  return d;
}

}  // namespace hka::asymptotics
