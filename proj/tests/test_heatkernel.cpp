#include <doctest.h>

#include <cmath>
#include <complex>

#include "hka/errors.hpp"
#include "hka/heatkernel.hpp"
#include "hka/specfun.hpp"

#include "oracles.hpp"

using namespace hka;
namespace hk = hka::heatkernel;
using cplx = std::complex<double>;

namespace {
double rel_gap(const ScaledValue& a, const ScaledValue& b) {
  return std::abs(ScaledValue::ratio(a, b).real() - 1.0);
}
}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(hk::validate({0, 1, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(hk::validate({1, 0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(hk::validate({1, 1, -1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(hk::validate({1, 2, 0.0, cplx(1.0, 0.1)}), DomainError);
  CHECK_THROWS_AS(hk::validate({1, 1, 0.0, cplx(1.0, 0.5)}), DomainError);
  CHECK_NOTHROW(hk::validate({1, 1, 0.0, cplx(1.0, 0.1)}));
}

TEST_CASE("value at the origin: p(1,1;0,0) = 1/16") {
  // the full-line integrand integrates to pi^2/2, and the prefactor is 1/(8 pi^2)
  CHECK(hk::p_direct({1, 1, 0.0, 0.0}).real_value() ==
        doctest::Approx(1.0 / 16.0).epsilon(1e-10));
}

TEST_CASE("the two integral representations agree for m = 1") {
  auto a = hk::p_bessel_integral({1, 1, 1.0, 2.0});
  auto b = hk::p_cosine_integral(1, 1.0, cplx(2.0));
  CHECK(rel_gap(a, b) <= 1e-8);
}

TEST_CASE("evenness in v of the full-line form") {
  auto a = hk::p_cosine_integral(2, 0.5, cplx(3.0));
  auto b = hk::p_cosine_integral(2, 0.5, cplx(-3.0));
  CHECK(rel_gap(a, b) <= 1e-14);
}

TEST_CASE("monotone decay in v") {
  CHECK(hk::p_direct({1, 1, 0.0, 4.0}).log_abs() < hk::p_direct({1, 1, 0.0, 2.0}).log_abs());
}

TEST_CASE("direct route rejects the cancellation regime and negative v") {
  CHECK_THROWS_AS(hk::p_direct({1, 1, 0.0, 9.0}), DomainError);
  CHECK_THROWS_AS(hk::p_direct({1, 1, 0.0, -1.0}), DomainError);
}

TEST_CASE("contour route preconditions") {
  CHECK_THROWS_AS(hk::p_contour(1, 0.0, cplx(2.0)), DomainError);   // Re v < 4
  CHECK_THROWS_AS(hk::p_contour(1, 20.0, cplx(10.0)), DomainError);  // 4v/u too small
  CHECK_THROWS_AS(hk::kernel_value(1, 2, 0.0, 5.0, {}, hk::Route::contour), DomainError);
}

TEST_CASE("contour route agrees with the direct route in the overlap") {
  CHECK(rel_gap(hk::p_contour(1, 1.0, cplx(6.0)), hk::p_direct({1, 1, 1.0, 6.0})) <= 1e-6);
  CHECK(rel_gap(hk::p_contour(2, 0.0, cplx(5.0)), hk::p_direct({2, 1, 0.0, 5.0})) <= 1e-6);
}

TEST_CASE("contour route handles complex v inside the strip") {
  cplx v(6.0, 0.1);
  CHECK(std::abs(ScaledValue::ratio(hk::p_contour(1, 1.0, v), hk::p_cosine_integral(1, 1.0, v)) -
                 cplx(1.0)) <= 1e-8);
}

TEST_CASE("exact residue reproduces the leading large-v law at u = 0") {
  // value * 4^n (n-1)! v^{1-n} e^{pi v} -> 1
  auto p = hk::p_contour(2, 0.0, cplx(30.0));
  double normalized = std::exp(p.log_abs() + oracle::pi * 30.0 - std::log(30.0 / 16.0));
  CHECK(normalized > 0.9);
  CHECK(normalized < 1.1);
}

TEST_CASE("the shifted line term is exponentially smaller than the total") {
  auto terms = hk::p_contour_terms(1, 1.0, cplx(40.0));
  CHECK(terms.line_term.log_abs() - terms.total.log_abs() <= -oracle::pi * 40.0 / 4.0);
}

TEST_CASE("derivative recurrence reproduces direct evaluation two center indices up") {
  CHECK(rel_gap(hk::derive_m_plus_2(1, 1, 1.0, 5.0), hk::p_direct({1, 3, 1.0, 5.0})) <= 1e-4);
  CHECK(rel_gap(hk::derive_m_plus_2(2, 1, 0.0, 6.0), hk::p_direct({2, 3, 0.0, 6.0})) <= 1e-4);
  CHECK(hk::derive_m_plus_2(1, 1, 0.0, 3.0).real_value() > 0.0);
}

TEST_CASE("derivative recurrence flags an oversized step") {
  CHECK_THROWS_AS(hk::derive_m_plus_2(2, 1, 0.0, 5.0, {}, 1.1), ConvergenceError);
}

TEST_CASE("square-root integral recurrence matches direct evaluation") {
  CHECK(rel_gap(hk::integrate_from_m_plus_1(1, 1, 0.0, 4.0), hk::p_direct({1, 1, 0.0, 4.0})) <= 1e-6);
  CHECK(rel_gap(hk::integrate_from_m_plus_1(1, 2, 1.0, 5.0), hk::p_direct({1, 2, 1.0, 5.0})) <= 1e-5);
}

TEST_CASE("recurrence residual is small on the unit grid") {
  // d/dv p(n,m;u,v) + 2 pi v p(n,m+2;u,v) = 0
  for (int n : {1, 2}) {
    for (int m : {1, 2}) {
      for (double u : {0.0, 1.0}) {
        for (double v : {2.0, 5.0}) {
          const double h = 1e-3;
          auto lp = [&](double vv) { return hk::p_direct({n, m, u, vv}).log_abs(); };
          double dlog = oracle::central_diff4(lp, v, h);
          double dp = dlog * std::exp(lp(v));
          double rhs = 2.0 * oracle::pi * v * std::exp(hk::p_direct({n, m + 2, u, v}).log_abs());
          CHECK(std::abs(dp + rhs) <= 1e-4 * std::abs(dp));
        }
      }
    }
  }
}

TEST_CASE("all returned values are renormalized") {
  for (const auto& v :
       {hk::p_direct({1, 1, 0.5, 3.0}), hk::p_contour(1, 1.0, cplx(25.0)),
        hk::derive_m_plus_2(1, 1, 0.0, 30.0), hk::integrate_from_m_plus_1(1, 2, 0.0, 20.0)}) {
    double m = std::abs(v.mantissa());
    CHECK(m >= 0.5);
    CHECK(m < 2.0);
  }
}

TEST_CASE("automatic routing covers every index parity") {
  CHECK(hk::kernel_value(1, 1, 0.0, 3.0).real_value() > 0.0);   // direct
  CHECK(!hk::kernel_value(1, 1, 0.0, 20.0).is_zero());          // contour
  CHECK(!hk::kernel_value(2, 3, 1.0, 50.0).is_zero());          // derivative chain
  CHECK(!hk::kernel_value(1, 2, 0.0, 20.0).is_zero());          // sqrt-integral chain
  CHECK_THROWS_AS(hk::kernel_value(1, 1, 0.0, -1.0), DomainError);
}

TEST_CASE("physical kernel: scaling identity is exact by construction") {
  // h^{n+m} p_h at matched arguments is h-invariant
  const double z0_sq = 4.0, t0 = 3.0;
  const int n = 1, m = 2;
  auto at_h = [&](double h) {
    auto p = hk::heat_kernel(z0_sq * h, t0 * h, h, n, m);
    return p.log_abs() + (n + m) * std::log(h);
  };
  CHECK(at_h(1.0) == doctest::Approx(at_h(4.0)).epsilon(1e-12));
  CHECK(hk::heat_kernel(0.0, 0.0, 1.0, 1, 1).real_value() ==
        doctest::Approx(1.0 / 16.0).epsilon(1e-10));
  CHECK_THROWS_AS(hk::heat_kernel(1.0, 1.0, 0.0, 1, 1), DomainError);
}

TEST_CASE("physical kernel follows the distance exponent at large t") {
  const double h = 1.0, z_sq = 1.0;
  double prev_dev = 1e300;
  for (double t : {50.0, 100.0, 200.0}) {
    double logp = hk::heat_kernel(z_sq, t, h, 1, 1).log_abs();
    double d2 = specfun::cc_distance_squared(z_sq, t);
    double dev = std::abs(logp + d2 / (4.0 * h)) / (d2 / (4.0 * h));
    CHECK(dev < prev_dev);
    CHECK(dev < 0.05);
    prev_dev = dev;
  }
}
