#pragma once

#include <cmath>

namespace ftspec {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Compensated (Kahan) summation. Long accumulations over (block, frequency)
/// grids must not depend on traversal order at the 1e-12 level; plain doubles
/// lose that once T gets large.
class KahanAccumulator {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Upper tail 1 - Phi(x), computed without cancellation for large x.
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace ftspec
