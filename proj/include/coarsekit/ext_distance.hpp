#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>

namespace coarsekit::metric {

/// Nonnegative distance value that may be infinite. Finite values are exact
/// IEEE doubles; infinity marks unreachable pairs (points in different
/// components, empty-set distances). Addition absorbs infinity.
class ExtDistance {
public:
  constexpr ExtDistance() = default;

  explicit ExtDistance(double v) : v_(v) {
    if (std::isnan(v) || v < 0.0) {
      throw std::invalid_argument("ExtDistance: value must be nonnegative");
    }
  }

  static ExtDistance infinity() {
    ExtDistance d;
    d.v_ = std::numeric_limits<double>::infinity();
    return d;
  }

  double value() const { return v_; }
  bool is_infinite() const { return std::isinf(v_); }
  bool is_finite() const { return !std::isinf(v_); }

  friend ExtDistance operator+(ExtDistance a, ExtDistance b) {
    return ExtDistance(a.v_ + b.v_);
  }

  auto operator<=>(const ExtDistance&) const = default;

private:
  double v_ = 0.0;
};

}  // namespace coarsekit::metric
