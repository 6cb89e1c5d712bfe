#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "hka/errors.hpp"

namespace hka {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  // Absolute error level (natural-log units) below which refinement stops.
  // The default is far below anything double precision can resolve, so the
  // roundoff floor (tracked through the L1 norm) is what usually ends
  // refinement in cancellation-dominated integrals.
  double abs_floor = -690.0;
  int max_panels = 4000;
  // Quadrature windows are cut where the integrand envelope has dropped this
  // many e-folds below its peak.
  double truncation_margin = 40.0;
};

inline void validate(const QuadratureConfig& cfg) {
  if (!(cfg.rel_tol > 0.0 && cfg.rel_tol <= 1e-3))
    throw DomainError("quadrature config: rel_tol must lie in (0, 1e-3]");
  if (cfg.max_panels < 8)
    throw DomainError("quadrature config: max_panels must be >= 8");
  if (!(cfg.truncation_margin > 0.0))
    throw DomainError("quadrature config: truncation_margin must be > 0");
}

namespace detail {

// Gauss-Kronrod 7-15 nodes on [-1, 1] (positive half; rule is symmetric).
inline constexpr double gk15_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double gk15_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double g7_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class T>
struct Panel {
  double a, b;
  T value;
  double err;
  double l1;
};

// Kahan-compensated sum of panel values.
template <class T>
T compensated_sum(const std::vector<Panel<T>>& panels) {
  T sum{};
  T comp{};
  for (const auto& p : panels) {
    T y = p.value - comp;
    T t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace detail

// One Gauss-Kronrod 7-15 panel; the error estimate follows QUADPACK's
// rescaled (200*|K15-G7|)^1.5 heuristic capped by the raw difference.
template <class F, class T = std::invoke_result_t<F, double>>
detail::Panel<T> gk15_panel(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T fc = f(c);
  T kronrod = detail::gk15_weights[7] * fc;
  T gauss = detail::g7_weights[3] * fc;
  double l1 = detail::gk15_weights[7] * std::abs(fc);
  for (int i = 0; i < 7; ++i) {
    const double x = detail::gk15_nodes[i] * h;
    T flo = f(c - x);
    T fhi = f(c + x);
    kronrod += detail::gk15_weights[i] * (flo + fhi);
    l1 += detail::gk15_weights[i] * (std::abs(flo) + std::abs(fhi));
    if (i % 2 == 1) gauss += detail::g7_weights[i / 2] * (flo + fhi);
  }
  kronrod *= h;
  gauss *= h;
  l1 *= std::abs(h);
  double diff = std::abs(kronrod - gauss);
  double err = diff;
  if (l1 > 0.0 && diff > 0.0) {
    double scaled = std::pow(200.0 * diff / l1, 1.5) * l1;
    err = std::min(diff, scaled);
  }
  return {a, b, kronrod, err, l1};
}

// Globally adaptive Gauss-Kronrod over the given panel edges. Stops when the
// total error estimate falls under max(rel_tol*|I|, exp(abs_floor), roundoff
// floor); throws ConvergenceError if max_panels is exhausted first.
template <class F, class T = std::invoke_result_t<F, double>>
T integrate_adaptive(F&& f, const std::vector<double>& edges,
                     const QuadratureConfig& cfg) {
  if (edges.size() < 2) throw DomainError("integrate_adaptive: need at least one interval");
  std::vector<detail::Panel<T>> panels;
  panels.reserve(edges.size() + 64);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    panels.push_back(gk15_panel(f, edges[i], edges[i + 1]));

  const double eps = std::numeric_limits<double>::epsilon();
  while (true) {
    double total_err = 0.0, total_l1 = 0.0, total_abs = 0.0;
    T total = detail::compensated_sum(panels);
    for (const auto& p : panels) {
      total_err += p.err;
      total_l1 += p.l1;
    }
    total_abs = std::abs(total);
    const double floor =
        std::max(std::exp(cfg.abs_floor), 8.0 * eps * total_l1);
    if (total_err <= std::max(cfg.rel_tol * total_abs, floor)) return total;
    if (static_cast<int>(panels.size()) >= cfg.max_panels)
      throw ConvergenceError("integrate_adaptive: panel refinement stalled");

    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].err > panels[worst].err) worst = i;
    detail::Panel<T> p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    panels[worst] = gk15_panel(f, p.a, mid);
    panels.push_back(gk15_panel(f, mid, p.b));
  }
}

template <class F, class T = std::invoke_result_t<F, double>>
T integrate_adaptive(F&& f, double a, double b, const QuadratureConfig& cfg) {
  return integrate_adaptive(std::forward<F>(f), std::vector<double>{a, b}, cfg);
}

// Trapezoid rule over one period [-pi, pi), doubling the node count until two
// successive levels agree (relative tolerance with an L1 roundoff floor).
// Spectrally accurate for analytic periodic integrands, which is the only way
// it is used here.
template <class F>
std::complex<double> trapezoid_periodic(F&& f, int n0, double rel_tol,
                                        int max_doublings = 10) {
  constexpr double pi = 3.14159265358979323846;
  const double eps = std::numeric_limits<double>::epsilon();
  int n = std::max(n0, 16);
  std::complex<double> sum{};
  double l1 = 0.0;
  for (int k = 0; k < n; ++k) {
    auto v = f(-pi + 2.0 * pi * k / n);
    sum += v;
    l1 += std::abs(v);
  }
  std::complex<double> t = sum * (2.0 * pi / n);
  double l1_int = l1 * (2.0 * pi / n);
  for (int d = 0; d < max_doublings; ++d) {
    std::complex<double> odd{};
    double l1_odd = 0.0;
    for (int k = 0; k < n; ++k) {
      auto v = f(-pi + 2.0 * pi * (k + 0.5) / n);
      odd += v;
      l1_odd += std::abs(v);
    }
    std::complex<double> t2 = 0.5 * t + odd * (pi / n);
    l1_int = 0.5 * l1_int + l1_odd * (pi / n);
    n *= 2;
    double delta = std::abs(t2 - t);
    t = t2;
    if (delta <= std::max(rel_tol * std::abs(t2), 32.0 * eps * l1_int)) return t;
  }
  throw ConvergenceError("trapezoid_periodic: node doubling did not settle");
}

// Trapezoid rule on [-L, L] with step halving; for analytic integrands that
// decay exponentially toward the cut ends this converges geometrically. The
// L1 floor ends refinement once the oscillatory cancellation has eaten all
// the relative accuracy double precision can offer.
template <class F>
std::complex<double> trapezoid_line(F&& f, double half_length, double step0,
                                    double rel_tol, int max_halvings = 8) {
  const double eps = std::numeric_limits<double>::epsilon();
  double h = step0;
  double l1_int = 0.0;
  auto base_level = [&](double step) {
    std::complex<double> s{};
    double l1 = 0.0;
    long k_max = static_cast<long>(std::floor(half_length / step));
    for (long k = -k_max; k <= k_max; ++k) {
      auto v = f(k * step);
      s += v;
      l1 += std::abs(v);
    }
    l1_int = l1 * step;
    return s * step;
  };
  auto refine = [&](double step, std::complex<double> prev) {
    // previous nodes at spacing 2*step; add the odd multiples of step
    std::complex<double> s{};
    double l1 = 0.0;
    long k_max = static_cast<long>(std::floor((half_length - step) / (2.0 * step)));
    for (long k = -k_max - 1; k <= k_max; ++k) {
      auto v = f((2 * k + 1) * step);
      s += v;
      l1 += std::abs(v);
    }
    l1_int = 0.5 * l1_int + l1 * step;
    return 0.5 * prev + s * step;
  };
  std::complex<double> t = base_level(h);
  for (int d = 0; d < max_halvings; ++d) {
    h *= 0.5;
    std::complex<double> t2 = refine(h, t);
    double delta = std::abs(t2 - t);
    t = t2;
    if (delta <= std::max(rel_tol * std::abs(t2), 32.0 * eps * l1_int)) return t;
  }
  throw ConvergenceError("trapezoid_line: step halving did not settle");
}

}  // namespace hka
