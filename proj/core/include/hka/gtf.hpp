#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "hka/errors.hpp"

namespace hka::gtf {

using cplx = std::complex<double>;

// Open sector Delta = {|z| > r_min, |arg z| < theta0} together with the
// closed subsector Delta' = {|z| > r_min, |arg z| <= theta1}.
struct Sector {
  double r_min = 1.0;
  double theta0 = 1.5707963267948966;  // pi/2
  double theta1 = 0.7853981633974483;  // pi/4

  void validate() const;
  bool contains(cplx z) const;        // z in Delta
  bool contains_inner(cplx z) const;  // z in Delta'
};

// A catalog analytic function with (when available) its exact derivative.
// Principal branches of log and powers throughout; the sector keeps arguments
// away from the negative real axis.
class FunctionSpec {
 public:
  static FunctionSpec power_log(cplx alpha, cplx beta);            // z^a log^b z
  static FunctionSpec power_exp(cplx alpha, cplx beta, cplx gamma);  // z^a e^{b z^g}
  static FunctionSpec plain_log();
  static FunctionSpec log_plus_sin();  // log z + sin(log z)
  static FunctionSpec user(std::string name, std::function<cplx(cplx)> f,
                           std::function<cplx(cplx)> df = {});

  cplx operator()(cplx z) const { return f_(z); }
  bool has_derivative() const { return static_cast<bool>(df_); }
  cplx derivative(cplx z) const;
  const std::string& name() const { return name_; }

 private:
  FunctionSpec(std::string name, std::function<cplx(cplx)> f,
               std::function<cplx(cplx)> df)
      : name_(std::move(name)), f_(std::move(f)), df_(std::move(df)) {}
  std::string name_;
  std::function<cplx(cplx)> f_;
  std::function<cplx(cplx)> df_;
};

struct ContourCircle {
  cplx center;
  double radius = 1.0;
  int nodes = 256;
};
// Circle legality: radius in (0, |center|/2] and every node inside the sector.
void validate_circle(const ContourCircle& c, const Sector& sector);

// f'(center) from the Cauchy integral on the circle, trapezoid nodes doubled
// until two levels agree.
cplx cauchy_derivative(const FunctionSpec& f, const ContourCircle& circle);

// The per-point constant of the contour criterion:
//   c_hat(z) = [oint_{C_z} |g(xi)| / |xi - z|^2 |dxi|] / |g'(z)|.
// Boundedness of c_hat over the inner sector is what licenses differentiating
// asymptotic relations against g.
double gtf_ratio(const FunctionSpec& g, cplx z, double radius, int nodes = 256);

struct RadiusRule {
  enum class Kind { half_sine, power, fixed, custom };
  static RadiusRule half_sine();
  static RadiusRule power(double exponent);  // |z|^{1-exponent}
  static RadiusRule fixed(double r);
  static RadiusRule custom(std::string tag, std::function<double(cplx)> fn);
  double radius_at(cplx z, const Sector& sector) const;
  std::string tag;
  Kind kind = Kind::half_sine;
  double param = 0.0;
  std::function<double(cplx)> fn;
};

struct ScanGrid {
  double r_lo = 1e2;
  double r_hi = 1e5;
  int rings_per_decade = 8;
  int arg_samples = 5;
};

enum class Verdict { bounded, growing, inconclusive };
const char* to_string(Verdict v);

struct GtfReport {
  struct Sample {
    cplx z;
    double c_hat;
  };
  std::vector<Sample> samples;
  double sup_c_hat = 0.0;
  double growth_slope = 0.0;  // log-log slope of per-ring sup against |z|
  Verdict verdict = Verdict::inconclusive;
  std::string radius_rule_tag;
};

inline constexpr double growth_slope_threshold = 0.1;

GtfReport gtf_scan(const FunctionSpec& g, const Sector& sector,
                   const RadiusRule& rule, const ScanGrid& grid);

// Pointwise form of the sufficient condition: sup_{xi in C_z} |g(xi)|/R(z)
// against |g'(z)|. margin = lhs_sup/rhs; c_hat <= 2 pi margin always.
struct SufficientCheck {
  double lhs_sup = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
};
SufficientCheck sufficient_check(const FunctionSpec& g, cplx z, double radius,
                                 int nodes = 256);

// The necessary condition's ratio rho(z) = |g(z)| / |z g'(z)|; boundedness
// along a ray is necessary for membership.
double necessary_check(const FunctionSpec& g, cplx z);

// Two-sided logarithmic-derivative band c1 <= |g'/g| <= c2 turned into the
// growth bound |g(xi)| <= c1^{-1} e^{c2 |xi - z|} |g'(z)|.
struct BandBound {
  double bound = 0.0;
  double actual = 0.0;
};
BandBound log_band_bound(const FunctionSpec& g, cplx z, cplx xi, double c1, double c2);

// f expanded against terms f_n with scale sequence g_n.
struct ExpansionSpec {
  FunctionSpec f;
  std::vector<FunctionSpec> terms;
  std::vector<FunctionSpec> scales;
  void validate() const;
};

struct RemainderRow {
  double r = 0.0;          // sample |z| on the positive real ray
  double remainder = 0.0;  // |(f - sum_{n<=N} f_n) / g_N|
  double remainder_deriv = 0.0;  // |(f' - sum_{n<=N} f_n') / g_N'|
};
struct ExpansionReport {
  std::vector<RemainderRow> rows;
  bool values_decreasing = false;  // remainder column decreasing along the ray
  bool derivs_decreasing = false;  // derivative column decreasing along the ray
};
ExpansionReport diff_expansion_check(const ExpansionSpec& spec, const Sector& sector,
                                     const std::vector<double>& ray, int order);

// Oscillation amplitude (max - min)/2 of Re(z f'(z)) over a log-spaced real
// ray; the detector for derivative asymptotics failing while the value
// asymptotics hold.
double derivative_oscillation(const FunctionSpec& f, double r_lo, double r_hi,
                              int samples_per_decade = 64);
inline constexpr double oscillation_threshold = 0.5;

}  // namespace hka::gtf
