#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "hka/errors.hpp"
#include "hka/gtf.hpp"

#include "oracles.hpp"

using namespace hka;
using namespace hka::gtf;
using cplx = std::complex<double>;

namespace {
const Sector quarter_sector{1.0, oracle::pi / 2.0, oracle::pi / 4.0};
}

TEST_CASE("sector validation and containment") {
  CHECK_THROWS_AS((Sector{1.0, 2.0, 2.5}).validate(), DomainError);
  CHECK_THROWS_AS((Sector{0.0, 1.0, 0.5}).validate(), DomainError);
  CHECK_THROWS_AS((Sector{1.0, 3.5, 0.5}).validate(), DomainError);
  // the closed subsector sits inside the open sector
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> rad(1.5, 1e5), ang(-oracle::pi / 4, oracle::pi / 4);
  for (int i = 0; i < 200; ++i) {
    cplx z = std::polar(rad(rng), ang(rng));
    if (quarter_sector.contains_inner(z)) CHECK(quarter_sector.contains(z));
  }
}

TEST_CASE("catalog parameter validation") {
  CHECK_THROWS_AS(FunctionSpec::power_log(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(FunctionSpec::power_exp(1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(FunctionSpec::power_exp(1.0, 1.0, cplx(-0.5, 0.0)), DomainError);
}

TEST_CASE("circle legality") {
  CHECK_THROWS_AS(validate_circle({cplx(10.0), 6.0, 64}, quarter_sector), DomainError);
  CHECK_THROWS_AS(validate_circle({cplx(2.0, 0.0), 1.0, 64},
                                  Sector{1.5, oracle::pi / 2, oracle::pi / 4}),
                  DomainError);  // dips below r_min
  CHECK_NOTHROW(validate_circle({cplx(10.0), 2.0, 64}, quarter_sector));
}

TEST_CASE("contour derivative on catalog examples") {
  auto square = FunctionSpec::user("square", [](cplx z) { return z * z; });
  CHECK(cauchy_derivative(square, {cplx(3.0), 1.0, 64}).real() ==
        doctest::Approx(6.0).epsilon(1e-13));
  auto ez = FunctionSpec::power_exp(0.0, 1.0, 1.0);
  CHECK(std::abs(cauchy_derivative(ez, {cplx(2.0), 0.5, 64}) - std::exp(cplx(2.0))) <=
        1e-12 * std::exp(2.0));
  auto zlz = FunctionSpec::power_log(1.0, 1.0);
  CHECK(std::abs(cauchy_derivative(zlz, {cplx(10.0), 2.0, 64}) -
                 cplx(std::log(10.0) + 1.0)) <= 1e-10 * (std::log(10.0) + 1.0));
}

TEST_CASE("contour derivative agrees with every catalog derivative") {
  std::mt19937 rng(20240818);
  std::uniform_real_distribution<double> rad(5.0, 5e3), ang(-0.6, 0.6), rr(0.05, 0.45);
  std::vector<FunctionSpec> fns = {
      FunctionSpec::power_log(cplx(1.0), cplx(2.0)),
      FunctionSpec::power_log(cplx(-0.5, 0.3), cplx(1.0)),
      FunctionSpec::power_exp(cplx(0.0), cplx(1.0), cplx(0.5)),
      FunctionSpec::plain_log(),
      FunctionSpec::log_plus_sin(),
  };
  for (const auto& f : fns) {
    for (int i = 0; i < 12; ++i) {
      cplx z = std::polar(rad(rng), ang(rng));
      double radius = rr(rng) * std::abs(z);
      cplx exact = f.derivative(z);
      cplx numeric = cauchy_derivative(f, {z, radius, 128});
      CHECK(std::abs(numeric - exact) <= 1e-10 * std::abs(exact));
    }
  }
}

TEST_CASE("domination ratio on reference points") {
  auto ident = FunctionSpec::power_log(1.0, 0.0);
  // g = z at z = 10, radius 1: (2 pi / r) mean|xi| / |g'| with mean|xi| a bit above 10
  double c = gtf_ratio(ident, cplx(10.0), 1.0);
  CHECK(c == doctest::Approx(20.0 * oracle::pi).epsilon(5e-3));
  // g = e^z on the real axis: c_hat <= 2 pi e since |g| <= e^{x+1} on the circle
  auto ez = FunctionSpec::power_exp(0.0, 1.0, 1.0);
  CHECK(gtf_ratio(ez, cplx(20.0), 1.0) <= 2.0 * oracle::pi * std::exp(1.0) * (1.0 + 1e-10));
  CHECK_THROWS_AS(gtf_ratio(ident, cplx(10.0), 6.0, 64), DomainError);
}

TEST_CASE("domination ratio grows along the axis for the logarithm") {
  auto lg = FunctionSpec::plain_log();
  std::vector<double> lx, ly;
  for (double x : {1e2, 1e4, 1e6}) {
    double r = 0.5 * std::sin(oracle::pi / 4.0) * x;
    lx.push_back(std::log(x));
    ly.push_back(std::log(gtf_ratio(lg, cplx(x), r)));
  }
  CHECK(oracle::fit_slope(lx, ly) > 0.05);
  CHECK(ly[2] > ly[1]);
  CHECK(ly[1] > ly[0]);
}

TEST_CASE("domination ratio is scale invariant in g") {
  auto g = FunctionSpec::power_log(2.0, 1.0);
  cplx c(2.5, -1.3);
  auto scaled = FunctionSpec::user(
      "scaled", [g, c](cplx z) { return c * g(z); },
      [g, c](cplx z) { return c * g.derivative(z); });
  double a = gtf_ratio(g, cplx(50.0), 5.0);
  double b = gtf_ratio(scaled, cplx(50.0), 5.0);
  CHECK(a == doctest::Approx(b).epsilon(1e-13));
}

TEST_CASE("scan verdicts reproduce the catalog classification") {
  ScanGrid grid;  // [1e2, 1e5], 8 rings/decade, 5 arguments
  auto bounded1 = gtf_scan(FunctionSpec::power_log(1.0, 0.0), quarter_sector,
                           RadiusRule::half_sine(), grid);
  CHECK(bounded1.verdict == Verdict::bounded);
  auto bounded2 = gtf_scan(FunctionSpec::power_log(1.0, 2.0), quarter_sector,
                           RadiusRule::half_sine(), grid);
  CHECK(bounded2.verdict == Verdict::bounded);
  auto bounded3 = gtf_scan(FunctionSpec::power_exp(0.0, 1.0, 0.5), quarter_sector,
                           RadiusRule::power(0.5), grid);
  CHECK(bounded3.verdict == Verdict::bounded);
  auto growing = gtf_scan(FunctionSpec::plain_log(), quarter_sector,
                          RadiusRule::half_sine(), grid);
  CHECK(growing.verdict == Verdict::growing);
  CHECK(growing.growth_slope > growth_slope_threshold);
  CHECK(growing.radius_rule_tag == "half_sine");
}

TEST_CASE("scan geometry errors propagate") {
  ScanGrid grid{1e2, 1e3, 4, 3};
  // in a thin sector the legal radius cap 0.5|z| still pokes outside
  Sector thin{1.0, 0.5, 0.45};
  CHECK_THROWS_AS(gtf_scan(FunctionSpec::plain_log(), thin,
                           RadiusRule::custom("too_big", [](cplx z) { return std::abs(z); }),
                           grid),
                  DomainError);
  CHECK_THROWS_AS(gtf_scan(FunctionSpec::plain_log(), quarter_sector, RadiusRule::half_sine(),
                           ScanGrid{0.5, 1e3, 4, 3}),
                  DomainError);
}

TEST_CASE("pointwise sufficient condition dominates the contour ratio") {
  // c_hat <= 2 pi sup|g|/(R |g'|) on every sample; e^z probes stay below the
  // double overflow line
  auto check_domination = [](const FunctionSpec& g, double x, double radius) {
    double c = gtf_ratio(g, cplx(x), radius);
    auto s = sufficient_check(g, cplx(x), radius);
    CHECK(c <= 2.0 * oracle::pi * s.margin * (1.0 + 1e-12));
  };
  auto plog = FunctionSpec::power_log(2.0, 1.0);
  for (double x : {30.0, 100.0, 1000.0}) check_domination(plog, x, 0.25 * x);
  auto pexp = FunctionSpec::power_exp(0.0, 1.0, 1.0);
  for (double x : {10.0, 30.0, 100.0}) check_domination(pexp, x, 1.0);
  auto ident = FunctionSpec::power_log(1.0, 0.0);
  auto s = sufficient_check(ident, cplx(10.0), 1.0);
  CHECK(s.margin == doctest::Approx(11.0).epsilon(1e-10));
  auto ez = FunctionSpec::power_exp(0.0, 1.0, 1.0);
  auto se = sufficient_check(ez, cplx(30.0), 1.0);
  CHECK(se.margin <= std::exp(1.0) * (31.0 / 30.0));
}

TEST_CASE("necessary condition ratios") {
  auto lg = FunctionSpec::plain_log();
  CHECK(necessary_check(lg, cplx(1e6)) / necessary_check(lg, cplx(1e2)) ==
        doctest::Approx(3.0).epsilon(1e-12));
  // strictly increasing along the axis, exactly log x
  double prev = 0.0;
  for (double x : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    double rho = necessary_check(lg, cplx(x));
    CHECK(rho == doctest::Approx(std::log(x)).epsilon(1e-13));
    CHECK(rho > prev);
    prev = rho;
  }
  // rho for z^alpha is 1/|alpha| everywhere
  auto pw = FunctionSpec::power_log(cplx(2.0), 0.0);
  CHECK(necessary_check(pw, cplx(37.0, 11.0)) == doctest::Approx(0.5).epsilon(1e-13));
  // rho for e^z decays like 1/x
  auto ez = FunctionSpec::power_exp(0.0, 1.0, 1.0);
  CHECK(necessary_check(ez, cplx(100.0)) == doctest::Approx(0.01).epsilon(1e-13));
}

TEST_CASE("logarithmic-derivative band bound") {
  auto ez = FunctionSpec::power_exp(0.0, 1.0, 1.0);
  auto tight = log_band_bound(ez, cplx(0.0), cplx(2.0), 1.0, 1.0);
  CHECK(tight.bound == doctest::Approx(std::exp(2.0)).epsilon(1e-13));
  CHECK(tight.actual == doctest::Approx(std::exp(2.0)).epsilon(1e-13));

  auto zez = FunctionSpec::user(
      "z_exp", [](cplx z) { return z * std::exp(z); },
      [](cplx z) { return (1.0 + z) * std::exp(z); });
  auto bb = log_band_bound(zez, cplx(10.0), cplx(11.0), 1.0, 1.2);
  CHECK(bb.actual <= bb.bound);
  // degenerate endpoint: the band itself forces |g(z)| <= |g'(z)|/c1
  auto deg = log_band_bound(zez, cplx(10.0), cplx(10.0), 1.0, 1.2);
  CHECK(deg.actual <= deg.bound);
  // endpoint outside the band
  CHECK_THROWS_AS(log_band_bound(zez, cplx(10.0), cplx(11.0), 1.11, 1.2), DomainError);
  CHECK_THROWS_AS(log_band_bound(zez, cplx(10.0), cplx(11.0), 0.0, 1.2), DomainError);
}

namespace {
ExpansionSpec taylor_instance(int count) {
  std::vector<FunctionSpec> terms, scales;
  for (int k = 0; k < count; ++k) {
    double kfact = std::tgamma(k + 1.0);
    terms.push_back(FunctionSpec::user(
        "term", [k, kfact](cplx z) { return std::pow(z, -k) / kfact; },
        [k, kfact](cplx z) { return -static_cast<double>(k) * std::pow(z, -k - 1) / kfact; }));
    scales.push_back(FunctionSpec::user(
        "scale", [k](cplx z) { return std::pow(z, -k); },
        [k](cplx z) { return -static_cast<double>(k) * std::pow(z, -k - 1); }));
  }
  return {FunctionSpec::user(
              "exp_inv", [](cplx z) { return std::exp(1.0 / z); },
              [](cplx z) { return -std::exp(1.0 / z) / (z * z); }),
          terms, scales};
}
}  // namespace

TEST_CASE("term-by-term differentiation on the Taylor instance") {
  auto spec = taylor_instance(6);
  const std::vector<double> ray = {10.0, 100.0, 1000.0};
  for (int order : {1, 2, 3}) {
    auto report = diff_expansion_check(spec, quarter_sector, ray, order);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.values_decreasing);
    CHECK(report.derivs_decreasing);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
      CHECK(report.rows[i].remainder * 10.0 <= report.rows[i - 1].remainder);
      CHECK(report.rows[i].remainder_deriv * 10.0 <= report.rows[i - 1].remainder_deriv);
    }
  }
  CHECK_THROWS_AS(diff_expansion_check(spec, quarter_sector, ray, 6), DomainError);
  CHECK_THROWS_AS(diff_expansion_check(spec, quarter_sector, {0.5}, 1), DomainError);
}

TEST_CASE("scales that do not shrink are rejected") {
  auto inv = FunctionSpec::user(
      "inv", [](cplx z) { return 1.0 / z; }, [](cplx z) { return -1.0 / (z * z); });
  auto inv2 = FunctionSpec::user(
      "inv2", [](cplx z) { return 2.0 / z; }, [](cplx z) { return -2.0 / (z * z); });
  ExpansionSpec bad{FunctionSpec::plain_log(), {inv, inv2}, {inv, inv2}};
  CHECK_THROWS_AS(diff_expansion_check(bad, quarter_sector, {10.0, 100.0}, 1), DomainError);
}

TEST_CASE("bounded scale sequence transfers decrease to the derivative column") {
  // every scale z^{-k} scans bounded, and then wherever the remainder column
  // decreases along the ray the derivative column decreases with it
  ScanGrid grid{1e2, 1e4, 6, 3};
  for (int k : {1, 2, 3}) {
    auto scan = gtf_scan(FunctionSpec::power_log(cplx(-k, 0.0), 0.0), quarter_sector,
                         RadiusRule::half_sine(), grid);
    CHECK(scan.verdict == Verdict::bounded);
  }
  auto spec = taylor_instance(6);
  for (int order : {1, 2, 3}) {
    auto report = diff_expansion_check(spec, quarter_sector, {10.0, 100.0, 1000.0}, order);
    if (report.values_decreasing) CHECK(report.derivs_decreasing);
  }
}

TEST_CASE("oscillating counterexample: values converge, derivatives do not") {
  auto f = FunctionSpec::log_plus_sin();
  auto lg = FunctionSpec::plain_log();
  // value-side remainder (f - log z)/log z decays along the ray
  double r_lo = std::abs((f(cplx(1e2)) - lg(cplx(1e2))) / lg(cplx(1e2)));
  double r_hi = std::abs((f(cplx(1e6)) - lg(cplx(1e6))) / lg(cplx(1e6)));
  CHECK(r_hi < r_lo);
  // derivative-side ratio z f'(z) oscillates with amplitude about 1
  CHECK(derivative_oscillation(f, 1e2, 1e6) >= 0.9);
  CHECK(derivative_oscillation(f, 1e2, 1e6) > oscillation_threshold);
  // yet the derivative stays dominated by log z / z
  double sup = 0.0;
  for (double x = 1e2; x <= 1e6; x *= 1.2)
    sup = std::max(sup, std::abs(f.derivative(cplx(x))) * x / std::abs(std::log(x)));
  CHECK(sup <= 2.0);
}
