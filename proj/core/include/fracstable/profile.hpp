// Closed-form profile functions on a period interval [0, q), plus a
// tabulated piecewise-linear fallback. Boundary values and supremum
// queries are exact for every family; that exactness is what the
// sufficient-condition checklist relies on.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracstable {

class ProfileFn {
 public:
  enum class Family { linear, tent, indicator, cosine, constant, tabulated };

  static ProfileFn linear(double q) { return ProfileFn(Family::linear, q); }
  static ProfileFn tent(double q) { return ProfileFn(Family::tent, q); }
  static ProfileFn indicator(double q) { return ProfileFn(Family::indicator, q); }
  static ProfileFn cosine(double q, double frequency, double phase = 0.0) {
    ProfileFn p(Family::cosine, q);
    p.freq_ = frequency;
    p.phase_ = phase;
    return p;
  }
  static ProfileFn constant(double q, double value) {
    ProfileFn p(Family::constant, q);
    p.const_ = value;
    return p;
  }
  /// Knot values at the uniform positions i*q/(n-1), i = 0..n-1; the last
  /// knot is the left limit F(q-). Linear interpolation in between.
  static ProfileFn tabulated(double q, std::vector<double> values) {
    if (values.size() < 2)
      throw std::invalid_argument("tabulated profile needs at least 2 knots");
    for (double y : values)
      if (!std::isfinite(y))
        throw std::invalid_argument("tabulated profile: non-finite knot");
    ProfileFn p(Family::tabulated, q);
    p.knots_ = std::move(values);
    return p;
  }

  double operator()(double v) const {
    if (!(v >= 0.0 && v < q_))
      throw std::domain_error("profile evaluated outside [0, q)");
    switch (family_) {
      case Family::linear:
        return v;
      case Family::tent:
        return v < 0.5 * q_ ? v : q_ - v;
      case Family::indicator:
        return v < 0.5 * q_ ? 1.0 : 0.0;
      case Family::cosine:
        return std::cos(phase_ + freq_ * v);
      case Family::constant:
        return const_;
      case Family::tabulated: {
        double p = v * static_cast<double>(knots_.size() - 1) / q_;
        auto i = static_cast<std::size_t>(p);
        if (i >= knots_.size() - 1) i = knots_.size() - 2;
        double w = p - static_cast<double>(i);
        return knots_[i] + w * (knots_[i + 1] - knots_[i]);
      }
    }
    throw std::logic_error("unreachable");
  }

  double q() const { return q_; }
  Family family() const { return family_; }

  double value_at_zero() const {
    switch (family_) {
      case Family::linear:
        return 0.0;
      case Family::tent:
        return 0.0;
      case Family::indicator:
        return 1.0;
      case Family::cosine:
        return std::cos(phase_);
      case Family::constant:
        return const_;
      case Family::tabulated:
        return knots_.front();
    }
    throw std::logic_error("unreachable");
  }

  /// Exact left limit F(q-).
  double left_limit_at_period() const {
    switch (family_) {
      case Family::linear:
        return q_;
      case Family::tent:
        return 0.0;
      case Family::indicator:
        return 0.0;
      case Family::cosine:
        return std::cos(phase_ + freq_ * q_);
      case Family::constant:
        return const_;
      case Family::tabulated:
        return knots_.back();
    }
    throw std::logic_error("unreachable");
  }

  /// Exact essential supremum of |F| on [0, q).
  double sup_abs() const {
    switch (family_) {
      case Family::linear:
        return q_;
      case Family::tent:
        return 0.5 * q_;
      case Family::indicator:
        return 1.0;
      case Family::cosine:
        return trig_sup(std::fabs(std::cos(phase_)),
                        std::fabs(std::cos(phase_ + freq_ * q_)), 0.0);
      case Family::constant:
        return std::fabs(const_);
      case Family::tabulated: {
        double m = 0.0;
        for (double y : knots_) m = std::max(m, std::fabs(y));
        return m;
      }
    }
    throw std::logic_error("unreachable");
  }

  /// Essential supremum of |F'|; empty when F is not absolutely continuous
  /// (the indicator family). For tabulated profiles this is the largest
  /// interpolation slope, i.e. the difference quotient of the knots.
  std::optional<double> derivative_sup_abs() const {
    switch (family_) {
      case Family::linear:
        return 1.0;
      case Family::tent:
        return 1.0;
      case Family::indicator:
        return std::nullopt;
      case Family::cosine:
        return std::fabs(freq_) *
               trig_sup(std::fabs(std::sin(phase_)),
                        std::fabs(std::sin(phase_ + freq_ * q_)), 0.5 * M_PI);
      case Family::constant:
        return 0.0;
      case Family::tabulated: {
        double h = q_ / static_cast<double>(knots_.size() - 1);
        double m = 0.0;
        for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
          m = std::max(m, std::fabs(knots_[i + 1] - knots_[i]) / h);
        return m;
      }
    }
    throw std::logic_error("unreachable");
  }

  bool is_identically_zero() const {
    if (family_ == Family::constant) return const_ == 0.0;
    if (family_ == Family::tabulated) {
      for (double y : knots_)
        if (y != 0.0) return false;
      return true;
    }
    return false;
  }

  double cosine_frequency() const { return freq_; }
  double cosine_phase() const { return phase_; }
  double constant_value() const { return const_; }
  const std::vector<double>& knots() const { return knots_; }

  static std::string family_name(Family f);

 private:
  ProfileFn(Family f, double q) : family_(f), q_(q) {
    if (!(q > 0.0) || !std::isfinite(q))
      throw std::invalid_argument("profile period must be positive and finite");
  }

  // Max of |cos| (shift = 0) or |sin| (shift = pi/2) over the swept phase
  // interval: 1 if the interval contains an extremum, endpoint values
  // otherwise.
  double trig_sup(double end_a, double end_b, double shift) const {
    double lo = phase_ + shift, hi = phase_ + freq_ * q_ + shift;
    if (lo > hi) std::swap(lo, hi);
    if (hi - lo >= M_PI) return 1.0;
    double k = std::ceil(lo / M_PI);
    if (k * M_PI <= hi) return 1.0;
    return std::max(end_a, end_b);
  }

  Family family_;
  double q_;
  double freq_ = 0.0, phase_ = 0.0, const_ = 0.0;
  std::vector<double> knots_;
};

inline std::string ProfileFn::family_name(Family f) {
  switch (f) {
    case Family::linear: return "linear";
    case Family::tent: return "tent";
    case Family::indicator: return "indicator";
    case Family::cosine: return "cosine";
    case Family::constant: return "constant";
    case Family::tabulated: return "tabulated";
  }
  return "?";
}

}  // namespace fracstable
