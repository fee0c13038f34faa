#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "wtc/rational.hpp"

namespace wtc {

/// Closed interval [lo, hi] with lo < hi.
class Interval {
 public:
  Interval(Rat lo, Rat hi);

  const Rat& lo() const { return lo_; }
  const Rat& hi() const { return hi_; }
  Rat length() const { return hi_ - lo_; }
  Rat center() const { return (lo_ + hi_) / 2; }
  double loD() const { return lo_.get_d(); }
  double hiD() const { return hi_.get_d(); }
  double lengthD() const { return length().get_d(); }

  bool contains(const Rat& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }

  /// Concentric dilation: factor * I has the same center and factor times the length.
  Interval dilated(const Rat& factor) const;
  Interval translated(const Rat& shift) const { return {lo_ + shift, hi_ + shift}; }
  Interval scaled(const Rat& lambda) const;

  /// Intersection of positive length, if any.
  std::optional<Interval> intersect(const Interval& other) const;

  /// Distance from x to the interval (0 inside).
  Rat distance(const Rat& x) const;

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  Rat lo_;
  Rat hi_;
};

/// `a,b` with rational endpoints.
Interval parseInterval(std::string_view text);
std::string toString(const Interval& iv);

}  // namespace wtc
