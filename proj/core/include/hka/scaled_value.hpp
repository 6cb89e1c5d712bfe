#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace hka {

// A real or complex magnitude stored as mantissa * exp(log_scale), so that
// quantities like exp(-pi*v) at v = 500 stay representable. The mantissa is
// kept in [0.5, 2) by renormalization; zero is stored as (0, 0). Arithmetic
// works on the mantissas and keeps the exponent in log_scale, so products,
// quotients and sums of wildly different magnitudes never underflow.
class ScaledValue {
 public:
  using cplx = std::complex<double>;

  ScaledValue() = default;

  static ScaledValue from(cplx value) { return normalized(value, 0.0); }
  static ScaledValue from(double value) { return normalized(cplx(value, 0.0), 0.0); }
  // value = mantissa * exp(log_scale); renormalized on construction.
  static ScaledValue from_parts(cplx mantissa, double log_scale) {
    return normalized(mantissa, log_scale);
  }
  // exp(w) for complex w, with Re(w) going straight into the scale.
  static ScaledValue exponential(cplx w) {
    return normalized(std::polar(1.0, w.imag()), w.real());
  }

  cplx mantissa() const { return mant_; }
  double log_scale() const { return log_; }
  bool is_zero() const { return mant_ == cplx(0.0, 0.0); }

  // Natural log of |value|; -inf for zero.
  double log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(mant_)) + log_;
  }
  double arg() const { return std::arg(mant_); }

  // Collapse to a plain complex. Underflows to 0 and overflows to inf when the
  // value leaves the double range; callers that care must check log_abs first.
  cplx value() const { return mant_ * std::exp(log_); }
  double real_value() const { return value().real(); }

  bool representable() const { return std::abs(log_abs()) < 700.0; }

  ScaledValue operator-() const {
    ScaledValue r = *this;
    r.mant_ = -r.mant_;
    return r;
  }

  friend ScaledValue operator*(const ScaledValue& a, const ScaledValue& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return normalized(a.mant_ * b.mant_, a.log_ + b.log_);
  }
  friend ScaledValue operator/(const ScaledValue& a, const ScaledValue& b) {
    if (a.is_zero()) return {};
    return normalized(a.mant_ / b.mant_, a.log_ - b.log_);
  }
  friend ScaledValue operator*(const ScaledValue& a, cplx c) {
    return normalized(a.mant_ * c, a.log_);
  }
  friend ScaledValue operator*(const ScaledValue& a, double c) {
    return normalized(a.mant_ * c, a.log_);
  }
  friend ScaledValue operator*(double c, const ScaledValue& a) { return a * c; }

  friend ScaledValue operator+(const ScaledValue& a, const ScaledValue& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const ScaledValue& hi = (a.log_ >= b.log_) ? a : b;
    const ScaledValue& lo = (a.log_ >= b.log_) ? b : a;
    cplx m = hi.mant_ + lo.mant_ * std::exp(lo.log_ - hi.log_);
    return normalized(m, hi.log_);
  }
  friend ScaledValue operator-(const ScaledValue& a, const ScaledValue& b) {
    return a + (-b);
  }

  // a/b collapsed to a plain complex; valid whenever the two scales are close.
  static cplx ratio(const ScaledValue& a, const ScaledValue& b) {
    return (a.mant_ / b.mant_) * std::exp(a.log_ - b.log_);
  }

  ScaledValue scaled_by_exp(double dlog) const {
    if (is_zero()) return {};
    ScaledValue r = *this;
    r.log_ += dlog;
    return r;
  }

 private:
  static ScaledValue normalized(cplx m, double l) {
    double a = std::abs(m);
    ScaledValue r;
    if (a == 0.0) return r;
    if (!std::isfinite(a)) {
      r.mant_ = m;
      r.log_ = l;
      return r;
    }
    int ex = 0;
    std::frexp(a, &ex);  // |m| = f * 2^ex with f in [0.5, 1)
    r.mant_ = cplx(std::ldexp(m.real(), -ex), std::ldexp(m.imag(), -ex));
    r.log_ = l + static_cast<double>(ex) * ln2_;
    return r;
  }

  static constexpr double ln2_ = 0.69314718055994530942;

  cplx mant_{0.0, 0.0};
  double log_ = 0.0;
};

}  // namespace hka
