#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hka/scaled_value.hpp"

using hka::ScaledValue;
using cplx = std::complex<double>;

TEST_CASE("zero is stored as (0, 0)") {
  ScaledValue z;
  CHECK(z.is_zero());
  CHECK(z.mantissa() == cplx(0.0));
  CHECK(z.log_scale() == 0.0);
  CHECK(ScaledValue::from(0.0).is_zero());
  CHECK((ScaledValue::from(3.0) * ScaledValue::from(0.0)).is_zero());
  CHECK((ScaledValue::from(2.0) - ScaledValue::from(2.0)).is_zero());
}

TEST_CASE("renormalization contract holds through arithmetic") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> mag(-300.0, 300.0);
  std::uniform_real_distribution<double> ang(-3.1, 3.1);
  for (int i = 0; i < 2000; ++i) {
    auto a = ScaledValue::from_parts(std::polar(std::exp(mag(rng) / 40.0), ang(rng)), mag(rng));
    auto b = ScaledValue::from_parts(std::polar(std::exp(mag(rng) / 40.0), ang(rng)), mag(rng));
    for (const auto& v : {a * b, a / b, a + b, a - b, a * 3.7, -a}) {
      if (v.is_zero()) continue;
      double m = std::abs(v.mantissa());
      CHECK(m >= 0.5);
      CHECK(m < 2.0);
    }
  }
}

TEST_CASE("arithmetic matches plain doubles in the representable range") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-20.0, 20.0);
  for (int i = 0; i < 500; ++i) {
    double x = d(rng), y = d(rng);
    if (std::abs(y) < 1e-6) continue;
    auto sx = ScaledValue::from(x), sy = ScaledValue::from(y);
    CHECK((sx * sy).real_value() == doctest::Approx(x * y).epsilon(1e-14));
    CHECK((sx / sy).real_value() == doctest::Approx(x / y).epsilon(1e-14));
    CHECK((sx + sy).real_value() == doctest::Approx(x + y).epsilon(1e-12));
  }
}

TEST_CASE("log-scale arithmetic survives far below the double range") {
  auto a = ScaledValue::from_parts(1.3, -5000.0);
  auto b = ScaledValue::from_parts(0.9, -4990.0);
  auto prod = a * b;
  CHECK(prod.log_abs() == doctest::Approx(std::log(1.3 * 0.9) - 9990.0).epsilon(1e-14));
  auto sum = a + b;
  // b dominates by e^{10}
  CHECK(sum.log_abs() ==
        doctest::Approx(std::log(0.9 * (1.0 + (1.3 / 0.9) * std::exp(-10.0))) - 4990.0)
            .epsilon(1e-13));
  CHECK(ScaledValue::ratio(a, b).real() ==
        doctest::Approx((1.3 / 0.9) * std::exp(-10.0)).epsilon(1e-13));
}

TEST_CASE("exponential splits real part into the scale") {
  auto e = ScaledValue::exponential(cplx(-1234.5, 0.25));
  CHECK(e.log_abs() == doctest::Approx(-1234.5).epsilon(1e-15));
  CHECK(e.arg() == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("value() collapses with under/overflow at the double boundary") {
  CHECK(ScaledValue::from_parts(1.0, -800.0).value() == cplx(0.0));
  CHECK(ScaledValue::from_parts(1.0, -100.0).representable());
  CHECK(!ScaledValue::from_parts(1.0, -800.0).representable());
}
