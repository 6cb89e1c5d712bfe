#include "hka/gtf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hka::gtf {

namespace {

constexpr double pi = 3.14159265358979323846;

cplx cpow(cplx z, cplx a) {
  if (a == cplx(0.0)) return cplx(1.0);
  return std::exp(a * std::log(z));
}

// least-squares slope of y against x
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

void Sector::validate() const {
  if (!(r_min > 0.0)) throw DomainError("sector: r_min must be > 0");
  if (!(theta0 > 0.0 && theta0 < pi)) throw DomainError("sector: theta0 must lie in (0, pi)");
  if (!(theta1 > 0.0 && theta1 < theta0))
    throw DomainError("sector: theta1 must lie in (0, theta0)");
}

bool Sector::contains(cplx z) const {
  return std::abs(z) > r_min && std::abs(std::arg(z)) < theta0;
}

bool Sector::contains_inner(cplx z) const {
  return std::abs(z) > r_min && std::abs(std::arg(z)) <= theta1;
}

FunctionSpec FunctionSpec::power_log(cplx alpha, cplx beta) {
  if (alpha == cplx(0.0)) throw DomainError("power_log: alpha must be nonzero");
  auto f = [alpha, beta](cplx z) {
    cplx lz = std::log(z);
    cplx lpow = (beta == cplx(0.0)) ? cplx(1.0) : cpow(lz, beta);
    return cpow(z, alpha) * lpow;
  };
  // d/dz z^a log^b z = z^{a-1} log^{b-1} z (a log z + b)
  auto df = [alpha, beta](cplx z) {
    cplx lz = std::log(z);
    cplx lpow = (beta == cplx(1.0)) ? cplx(1.0) : cpow(lz, beta - 1.0);
    return cpow(z, alpha - 1.0) * lpow * (alpha * lz + beta);
  };
  return FunctionSpec("power_log", f, df);
}

FunctionSpec FunctionSpec::power_exp(cplx alpha, cplx beta, cplx gamma) {
  if (beta == cplx(0.0)) throw DomainError("power_exp: beta must be nonzero");
  if (!(gamma.real() > 0.0)) throw DomainError("power_exp: Re gamma must be > 0");
  auto f = [alpha, beta, gamma](cplx z) {
    cplx zp = (alpha == cplx(0.0)) ? cplx(1.0) : cpow(z, alpha);
    return zp * std::exp(beta * cpow(z, gamma));
  };
  auto df = [alpha, beta, gamma](cplx z) {
    cplx t1 = (alpha == cplx(0.0)) ? cplx(0.0) : alpha * cpow(z, alpha - 1.0);
    cplx t2 = beta * gamma * cpow(z, alpha + gamma - 1.0);
    return std::exp(beta * cpow(z, gamma)) * (t1 + t2);
  };
  return FunctionSpec("power_exp", f, df);
}

FunctionSpec FunctionSpec::plain_log() {
  return FunctionSpec(
      "plain_log", [](cplx z) { return std::log(z); },
      [](cplx z) { return 1.0 / z; });
}

FunctionSpec FunctionSpec::log_plus_sin() {
  return FunctionSpec(
      "log_plus_sin",
      [](cplx z) {
        cplx lz = std::log(z);
        return lz + std::sin(lz);
      },
      [](cplx z) { return (1.0 + std::cos(std::log(z))) / z; });
}

FunctionSpec FunctionSpec::user(std::string name, std::function<cplx(cplx)> f,
                                std::function<cplx(cplx)> df) {
  return FunctionSpec(std::move(name), std::move(f), std::move(df));
}

cplx FunctionSpec::derivative(cplx z) const {
  if (!df_) throw DomainError("FunctionSpec: no derivative available for " + name_);
  return df_(z);
}

void validate_circle(const ContourCircle& c, const Sector& sector) {
  if (!(c.radius > 0.0) || c.radius > 0.5 * std::abs(c.center))
    throw DomainError("circle: radius must lie in (0, |center|/2]");
  if (c.nodes < 16) throw DomainError("circle: need at least 16 nodes");
  for (int k = 0; k < c.nodes; ++k) {
    cplx xi = c.center + std::polar(c.radius, 2.0 * pi * k / c.nodes);
    if (!sector.contains(xi))
      throw DomainError("circle: contour leaves the sector");
  }
}

cplx cauchy_derivative(const FunctionSpec& f, const ContourCircle& circle) {
  // f'(c) = (1/(2 pi R)) int_0^{2pi} f(c + R e^{it}) e^{-it} dt
  int n = std::max(circle.nodes, 16);
  auto level = [&](int count) {
    cplx sum = 0.0;
    for (int k = 0; k < count; ++k) {
      double t = 2.0 * pi * k / count;
      sum += f(circle.center + std::polar(circle.radius, t)) * std::polar(1.0, -t);
    }
    return sum / (static_cast<double>(count) * circle.radius);
  };
  cplx prev = level(n);
  for (int d = 0; d < 12; ++d) {
    n *= 2;
    cplx cur = level(n);
    if (std::abs(cur - prev) <= 1e-11 * std::max(std::abs(cur), 1e-280)) return cur;
    prev = cur;
  }
  throw ConvergenceError("cauchy_derivative: node doubling did not settle");
}

namespace {

// mean of |g| over the circle, node count doubled until stable
double circle_mean_abs(const FunctionSpec& g, cplx z, double radius, int nodes) {
  int n = std::max(nodes, 16);
  auto level = [&](int count) {
    double sum = 0.0;
    for (int k = 0; k < count; ++k) {
      double a = std::abs(g(z + std::polar(radius, 2.0 * pi * k / count)));
      if (!std::isfinite(a))
        throw DomainError(
            "gtf_ratio: |g| leaves the double range on the contour; shrink the grid");
      sum += a;
    }
    return sum / count;
  };
  double prev = level(n);
  for (int d = 0; d < 12; ++d) {
    n *= 2;
    double cur = level(n);
    if (std::abs(cur - prev) <= 1e-10 * std::max(cur, 1e-280)) return cur;
    prev = cur;
  }
  throw ConvergenceError("gtf_ratio: node doubling did not settle");
}

cplx derivative_of(const FunctionSpec& g, cplx z, const Sector* sector) {
  if (g.has_derivative()) return g.derivative(z);
  double radius = 0.25 * std::abs(z);
  if (sector) radius = std::min(radius, 0.4 * std::sin(sector->theta0 - sector->theta1) * std::abs(z));
  return cauchy_derivative(g, {z, radius, 256});
}

}  // namespace

double gtf_ratio(const FunctionSpec& g, cplx z, double radius, int nodes) {
  if (!(radius > 0.0) || radius > 0.5 * std::abs(z))
    throw DomainError("gtf_ratio: radius must lie in (0, |z|/2]");
  double deriv = std::abs(derivative_of(g, z, nullptr));
  if (deriv == 0.0) throw DomainError("gtf_ratio: g'(z) = 0");
  // |xi - z| = radius on the circle, so the contour integral reduces to
  // (2 pi / radius) * mean |g|.
  return 2.0 * pi * circle_mean_abs(g, z, radius, nodes) / (radius * deriv);
}

RadiusRule RadiusRule::half_sine() { return {"half_sine", Kind::half_sine, 0.0, {}}; }
RadiusRule RadiusRule::power(double exponent) {
  return {"power(" + std::to_string(exponent) + ")", Kind::power, exponent, {}};
}
RadiusRule RadiusRule::fixed(double r) {
  if (!(r > 0.0)) throw DomainError("radius rule: fixed radius must be > 0");
  return {"fixed(" + std::to_string(r) + ")", Kind::fixed, r, {}};
}
RadiusRule RadiusRule::custom(std::string tag, std::function<double(cplx)> fn) {
  return {std::move(tag), Kind::custom, 0.0, std::move(fn)};
}

double RadiusRule::radius_at(cplx z, const Sector& sector) const {
  double r;
  switch (kind) {
    case Kind::half_sine:
      r = 0.5 * std::sin(sector.theta0 - sector.theta1) * std::abs(z);
      break;
    case Kind::power:
      r = std::pow(std::abs(z), 1.0 - param);
      break;
    case Kind::fixed:
      r = param;
      break;
    case Kind::custom:
      r = fn(z);
      break;
    default:
      throw DomainError("radius rule: unknown kind");
  }
  return std::min(r, 0.5 * std::abs(z));
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::bounded: return "bounded";
    case Verdict::growing: return "growing";
    default: return "inconclusive";
  }
}

GtfReport gtf_scan(const FunctionSpec& g, const Sector& sector,
                   const RadiusRule& rule, const ScanGrid& grid) {
  sector.validate();
  if (!(grid.r_lo > sector.r_min))
    throw DomainError("gtf_scan: grid must start beyond the sector radius");
  if (!(grid.r_hi > grid.r_lo)) throw DomainError("gtf_scan: empty radial range");
  if (grid.rings_per_decade < 1 || grid.arg_samples < 1)
    throw DomainError("gtf_scan: grid too coarse");

  const double decades = std::log10(grid.r_hi / grid.r_lo);
  const int rings = std::max(2, static_cast<int>(std::round(decades * grid.rings_per_decade))) + 1;

  GtfReport report;
  report.radius_rule_tag = rule.tag;
  std::vector<double> log_r, log_sup;
  for (int i = 0; i < rings; ++i) {
    double r = grid.r_lo * std::pow(grid.r_hi / grid.r_lo, static_cast<double>(i) / (rings - 1));
    double ring_sup = 0.0;
    for (int j = 0; j < grid.arg_samples; ++j) {
      double t = (grid.arg_samples == 1)
                     ? 0.0
                     : -sector.theta1 + 2.0 * sector.theta1 * j / (grid.arg_samples - 1);
      cplx z = std::polar(r, t);
      double radius = rule.radius_at(z, sector);
      validate_circle({z, radius, 64}, sector);
      double c_hat = gtf_ratio(g, z, radius);
      report.samples.push_back({z, c_hat});
      ring_sup = std::max(ring_sup, c_hat);
    }
    log_r.push_back(std::log(r));
    log_sup.push_back(std::log(ring_sup));
    report.sup_c_hat = std::max(report.sup_c_hat, ring_sup);
  }

  bool finite = true;
  for (double y : log_sup) finite = finite && std::isfinite(y);
  if (!finite || rings < 3) {
    report.verdict = Verdict::inconclusive;
    return report;
  }
  report.growth_slope = ls_slope(log_r, log_sup);
  report.verdict =
      report.growth_slope > growth_slope_threshold ? Verdict::growing : Verdict::bounded;
  return report;
}

SufficientCheck sufficient_check(const FunctionSpec& g, cplx z, double radius, int nodes) {
  if (!(radius > 0.0) || radius > 0.5 * std::abs(z))
    throw DomainError("sufficient_check: radius must lie in (0, |z|/2]");
  double sup = 0.0;
  for (int k = 0; k < nodes; ++k)
    sup = std::max(sup, std::abs(g(z + std::polar(radius, 2.0 * pi * k / nodes))));
  SufficientCheck out;
  out.lhs_sup = sup / radius;
  out.rhs = std::abs(derivative_of(g, z, nullptr));
  if (out.rhs == 0.0) throw DomainError("sufficient_check: g'(z) = 0");
  out.margin = out.lhs_sup / out.rhs;
  return out;
}

double necessary_check(const FunctionSpec& g, cplx z) {
  double deriv = std::abs(derivative_of(g, z, nullptr));
  if (deriv == 0.0) throw DomainError("necessary_check: g'(z) = 0");
  return std::abs(g(z)) / (std::abs(z) * deriv);
}

BandBound log_band_bound(const FunctionSpec& g, cplx z, cplx xi, double c1, double c2) {
  if (!(c1 > 0.0 && c2 >= c1)) throw DomainError("log_band_bound: need 0 < c1 <= c2");
  const double slack = 1e-12;
  for (cplx p : {z, xi}) {
    double rho = std::abs(derivative_of(g, p, nullptr) / g(p));
    if (rho < c1 * (1.0 - slack) || rho > c2 * (1.0 + slack))
      throw DomainError("log_band_bound: |g'/g| outside the band at an endpoint");
  }
  BandBound out;
  out.bound = std::exp(c2 * std::abs(xi - z)) * std::abs(derivative_of(g, z, nullptr)) / c1;
  out.actual = std::abs(g(xi));
  return out;
}

void ExpansionSpec::validate() const {
  if (terms.empty() || terms.size() != scales.size())
    throw DomainError("expansion: term and scale lists must match and be nonempty");
}

ExpansionReport diff_expansion_check(const ExpansionSpec& spec, const Sector& sector,
                                     const std::vector<double>& ray, int order) {
  spec.validate();
  sector.validate();
  if (order < 0 || static_cast<std::size_t>(order) + 1 > spec.terms.size())
    throw DomainError("diff_expansion_check: order exceeds the term list");
  if (ray.empty()) throw DomainError("diff_expansion_check: empty ray");

  // the scales must be an asymptotic sequence: each |g_{k+1}/g_k| shrinks
  // along the midline
  const double r1 = ray.front();
  const double r2 = std::max(ray.back(), 10.0 * r1);
  for (std::size_t k = 0; k + 1 < spec.scales.size(); ++k) {
    double q1 = std::abs(spec.scales[k + 1](cplx(r1)) / spec.scales[k](cplx(r1)));
    double q2 = std::abs(spec.scales[k + 1](cplx(r2)) / spec.scales[k](cplx(r2)));
    if (!(q2 < q1))
      throw DomainError("expansion: scales do not shrink along the midline");
  }

  std::vector<RemainderRow> rows;
  rows.reserve(ray.size());
  for (double r : ray) {
    cplx z(r, 0.0);
    if (!sector.contains_inner(z))
      throw DomainError("diff_expansion_check: ray point outside the inner sector");
    cplx partial = 0.0, partial_d = 0.0;
    for (int k = 0; k <= order; ++k) {
      partial += spec.terms[k](z);
      partial_d += derivative_of(spec.terms[k], z, &sector);
    }
    cplx fz = spec.f(z);
    cplx fdz = derivative_of(spec.f, z, &sector);
    cplx gz = spec.scales[order](z);
    cplx gdz = derivative_of(spec.scales[order], z, &sector);
    RemainderRow row;
    row.r = r;
    row.remainder = std::abs((fz - partial) / gz);
    row.remainder_deriv = std::abs((fdz - partial_d) / gdz);
    rows.push_back(row);
  }
  ExpansionReport report;
  report.values_decreasing = rows.size() > 1;
  report.derivs_decreasing = rows.size() > 1;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    report.values_decreasing =
        report.values_decreasing && rows[i].remainder < rows[i - 1].remainder;
    report.derivs_decreasing =
        report.derivs_decreasing && rows[i].remainder_deriv < rows[i - 1].remainder_deriv;
  }
  report.rows = std::move(rows);
  return report;
}

double derivative_oscillation(const FunctionSpec& f, double r_lo, double r_hi,
                              int samples_per_decade) {
  if (!(r_hi > r_lo && r_lo > 0.0)) throw DomainError("derivative_oscillation: bad range");
  const double decades = std::log10(r_hi / r_lo);
  const int count = std::max(2, static_cast<int>(std::round(decades * samples_per_decade)));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i <= count; ++i) {
    double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / count);
    cplx z(r, 0.0);
    double val = (z * derivative_of(f, z, nullptr)).real();
    lo = std::min(lo, val);
    hi = std::max(hi, val);
  }
  return 0.5 * (hi - lo);
}

}  // namespace hka::gtf
