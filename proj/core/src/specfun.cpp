#include "hka/specfun.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <string>

#include "hka/errors.hpp"

namespace hka::specfun {

namespace {

// sin(w)/w with the limit at 0.
cplx sinc(cplx w) {
  if (w == cplx(0.0)) return 1.0;
  return std::sin(w) / w;
}

// (2w - sin 2w) / w^3 as a power series in w^2; converges fast for |w| < 1.
cplx odd_numerator_over_w3(cplx w2) {
  // sum_{j>=0} (-1)^j 2^{2j+3} w^{2j} / (2j+3)!
  cplx term = 8.0 / 6.0;
  cplx sum = term;
  for (int j = 1; j <= 16; ++j) {
    term *= -4.0 * w2 / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

void check_pole(cplx value, const char* who) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw DomainError(std::string(who) + ": pole at a nonzero multiple of pi");
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn: requires x > 0");
  return std::tgamma(x);
}

double bessel_j(double nu, double x) {
  if (x < 0.0) throw DomainError("bessel_j: requires x >= 0");
  if (nu < -0.5) throw DomainError("bessel_j: requires nu >= -1/2");
  return boost::math::cyl_bessel_j(nu, x);
}

double norm_bessel_j(double nu, double x) {
  x = std::abs(x);  // entire even function of x
  if (x < 1e-2) {
    double q = 0.25 * x * x;
    double term = 1.0 / std::tgamma(nu + 1.0);
    double sum = term;
    for (int k = 1; k <= 4; ++k) {
      term *= -q / (k * (nu + k));
      sum += term;
    }
    return sum;
  }
  return std::pow(0.5 * x, -nu) * bessel_j(nu, x);
}

ScaledValue bessel_i_scaled(double nu, cplx z) {
  if (nu <= -0.5) throw DomainError("bessel_i_scaled: requires nu > -1/2");
  if (z.real() < 0.0) throw DomainError("bessel_i_scaled: requires Re z >= 0");

  if (z == cplx(0.0)) return ScaledValue::from(nu == 0.0 ? 1.0 : 0.0);

  const double az = std::abs(z);
  const bool asymptotic_ok = az > bessel_i_switchover && z.real() >= 0.5 * az;
  if (!asymptotic_ok) {
    // exp(-z) I_nu(z) = (z/2)^nu / (sqrt(pi) Gamma(nu+1/2)) *
    //                   int_0^pi sin^{2 nu} t * exp(-z (1 + cos t)) dt
    QuadratureConfig qc;
    qc.rel_tol = 1e-13;
    qc.max_panels = az > 200.0 ? 20000 : 4000;
    auto f = [&](double t) -> cplx {
      double s = std::sin(t);
      double w = (nu == 0.0) ? 1.0 : std::pow(s, 2.0 * nu);
      return w * std::exp(-z * (1.0 + std::cos(t)));
    };
    cplx integral = integrate_adaptive(f, {0.0, 0.5 * pi, pi}, qc);
    cplx pref = std::pow(0.5 * z, nu) / (std::sqrt(pi) * std::tgamma(nu + 0.5));
    return ScaledValue::from(pref * integral);
  }

  // Normalized large-argument series: exp(-z) I_nu(z) ~ (2 pi z)^{-1/2} *
  // sum_k (-1)^k a_k(nu) / z^k, truncated at the smallest term.
  cplx inv_z = 1.0 / z;
  cplx term = 1.0;
  cplx sum = 1.0;
  double prev = 1.0;
  for (int k = 1; k <= 40; ++k) {
    double num = 4.0 * nu * nu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
    term *= -num / (8.0 * k) * inv_z;
    double mag = std::abs(term);
    if (mag > prev) break;  // past the optimal truncation point
    sum += term;
    prev = mag;
    if (mag <= 1e-18 * std::abs(sum)) break;
  }
  return ScaledValue::from(sum / std::sqrt(2.0 * pi * z));
}

cplx mu(cplx w) {
  if (std::abs(w) < 0.5) {
    // w * P(w^2) / (2 sinc^2 w); no cancellation, exact limit 0 at w = 0.
    cplx s = sinc(w);
    return w * odd_numerator_over_w3(w * w) / (2.0 * s * s);
  }
  cplx s = std::sin(w);
  cplx value = (2.0 * w - std::sin(2.0 * w)) / (2.0 * s * s);
  check_pole(value, "mu");
  return value;
}

cplx mu_prime(cplx w) {
  if (std::abs(w) < 0.5) {
    cplx s = sinc(w);
    return 2.0 - odd_numerator_over_w3(w * w) * std::cos(w) / (s * s * s);
  }
  cplx value = 2.0 - 2.0 * mu(w) * std::cos(w) / std::sin(w);
  check_pole(value, "mu_prime");
  return value;
}

cplx mu_at_offset(cplx eps) {
  cplx s = std::sin(eps);
  cplx value = (2.0 * (pi - eps) + std::sin(2.0 * eps)) / (2.0 * s * s);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw DomainError("mu_at_offset: pole at offset 0");
  return value;
}

namespace {

// mu'(pi - eps) from the offset and the already-known value m = mu(pi - eps).
cplx mu_prime_at_offset(cplx eps, cplx m) {
  return 2.0 + 2.0 * m * std::cos(eps) / std::sin(eps);
}

// Newton solve of mu(pi - eps) = x in the offset variable eps, seeded at
// sqrt(pi/x). Damped when a step would leave the offset half-plane; one
// extra step after acceptance squares the residual away.
cplx solve_offset(cplx x) {
  cplx eps = std::sqrt(pi / x);
  const double tol = 1e-13 * std::abs(x);
  auto newton_step = [&](cplx e, cplx f) {
    // d/d(eps) mu(pi - eps) = -mu'(pi - eps)
    return f / mu_prime_at_offset(e, f + x);
  };
  for (int it = 0; it < 60; ++it) {
    cplx f = mu_at_offset(eps) - x;
    if (std::abs(f) <= tol) {
      cplx polish = eps + newton_step(eps, f);
      if (polish.real() > 0.0 && std::abs(polish) < 0.95) eps = polish;
      return eps;
    }
    cplx step = newton_step(eps, f);
    for (int damp = 0; damp < 30; ++damp) {
      cplx trial = eps + step;
      if (trial.real() > 0.0 && std::abs(trial) < 0.95) {
        eps = trial;
        break;
      }
      step *= 0.5;
    }
  }
  if (std::abs(mu_at_offset(eps) - x) <= 1e-11 * std::abs(x)) return eps;
  throw ConvergenceError("mu_inverse: Newton did not converge");
}

}  // namespace

cplx mu_inverse_offset(cplx x, const InverseBranchWindow& win) {
  if (!(std::abs(x) > win.r0))
    throw DomainError("mu_inverse: |x| must exceed the branch radius");
  if (!(std::abs(std::arg(x)) < win.eta0))
    throw DomainError("mu_inverse: arg x outside the branch sector");
  cplx eps = solve_offset(x);
  if (!(std::abs(eps) < win.r0_prime) ||
      !(std::abs(std::arg(eps)) < win.eta0_prime + 0.05))
    throw ConvergenceError("mu_inverse: solution left the target branch window");
  return eps;
}

cplx mu_inverse(cplx x, const InverseBranchWindow& win) {
  return pi - mu_inverse_offset(x, win);
}

double mu_inverse_real(double y) {
  if (y < 0.0) throw DomainError("mu_inverse_real: requires y >= 0");
  if (y == 0.0) return 0.0;
  if (y > 1e4) return pi - solve_offset(cplx(y)).real();

  auto mu_r = [](double t) { return mu(cplx(t)).real(); };
  auto mu_p = [](double t) { return mu_prime(cplx(t)).real(); };

  double lo = 0.0;
  double hi = 3.0;
  while (mu_r(hi) < y) hi = pi - 0.25 * (pi - hi);
  double t = std::min(1.5 * y, 0.5 * (lo + hi));
  if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
  // Newton with bisection fallback on the bracket. The residual floor near
  // the pole is ulp(theta) * mu', so the bracket-width stop matters there.
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 200; ++it) {
    double f = mu_r(t) - y;
    if (std::abs(f) <= 1e-13 * std::max(y, 1.0)) return t;
    if (f > 0.0)
      hi = t;
    else
      lo = t;
    if (hi - lo <= 4.0 * eps * (1.0 + t)) return t;
    double trial = t - f / mu_p(t);
    t = (trial > lo && trial < hi) ? trial : 0.5 * (lo + hi);
  }
  throw ConvergenceError("mu_inverse_real: bracketed Newton did not converge");
}

double cc_distance_squared(double z_sq, double t_abs) {
  if (z_sq < 0.0 || t_abs < 0.0)
    throw DomainError("cc_distance_squared: requires nonnegative inputs");
  if (z_sq == 0.0) return 4.0 * pi * t_abs;
  double theta = mu_inverse_real(4.0 * t_abs / z_sq);
  double ratio = (theta == 0.0) ? 1.0 : theta / std::sin(theta);
  return ratio * ratio * z_sq;
}

SaddleData saddle_data(double u, cplx v, const InverseBranchWindow& win) {
  if (!(u > 0.0)) throw DomainError("saddle_data: requires u > 0");
  cplx eps = mu_inverse_offset(4.0 * v / u, win);
  cplx theta = pi - eps;
  cplx s = std::sin(theta);
  cplx ratio = theta / s;
  SaddleData d;
  d.theta = theta;
  d.eps = eps;
  d.d_squared = ratio * ratio * u;
  d.u = u;
  d.v = v;
  d.d_squared_dv = 4.0 * theta;
  return d;
}

}  // namespace hka::specfun
