#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace moran {

/// log2 of zero. Every log-domain quantity in the library uses this marker.
inline constexpr double kLog2Zero = -std::numeric_limits<double>::infinity();

inline bool is_log2_zero(double x) noexcept { return x == kLog2Zero; }

/// log2(2^a + 2^b) without leaving the log domain.
inline double log2_add(double a, double b) noexcept {
  if (a < b) std::swap(a, b);
  if (is_log2_zero(b)) return a;
  return a + std::log2(1.0 + std::exp2(b - a));
}

/// log2(sum_i 2^{x_i}), shifting by the maximum before exponentiation.
inline double log2_sum(std::span<const double> xs) noexcept {
  double hi = kLog2Zero;
  for (double x : xs) hi = std::max(hi, x);
  if (is_log2_zero(hi)) return kLog2Zero;
  double acc = 0.0;
  for (double x : xs) acc += std::exp2(x - hi);
  return hi + std::log2(acc);
}

/// Streaming variant of log2_sum for terms produced one at a time.
class Log2Accumulator {
 public:
  void add(double x) noexcept {
    if (is_log2_zero(x)) return;
    if (x > max_) {
      sum_ = sum_ * std::exp2(max_ - x) + 1.0;
      max_ = x;
    } else {
      sum_ += std::exp2(x - max_);
    }
  }
  double value() const noexcept {
    return is_log2_zero(max_) ? kLog2Zero : max_ + std::log2(sum_);
  }

 private:
  double max_ = kLog2Zero;
  double sum_ = 0.0;
};

/// Round-to-integer aware ceiling of n^e. Exact integer powers such as
/// 64^(5/6) = 32 come out of std::pow with a few ulps of error; those are
/// snapped to the integer before taking the ceiling.
inline long long ceil_pow(double n, double e) {
  const double x = std::pow(n, e);
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) return static_cast<long long>(nearest);
  return static_cast<long long>(std::ceil(x));
}

}  // namespace moran
