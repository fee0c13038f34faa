#include "wtc/interval.hpp"

#include "wtc/error.hpp"

namespace wtc {

Interval::Interval(Rat lo, Rat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (!(lo_ < hi_))
    throw Error(ErrorCode::InvalidInterval, "[" + toString(lo_) + "," + toString(hi_) + "]");
}

Interval Interval::dilated(const Rat& factor) const {
  Rat half = length() * factor / 2;
  Rat c = center();
  return {c - half, c + half};
}

Interval Interval::scaled(const Rat& lambda) const {
  Rat a = lo_ * lambda;
  Rat b = hi_ * lambda;
  return a < b ? Interval(a, b) : Interval(b, a);
}

std::optional<Interval> Interval::intersect(const Interval& other) const {
  const Rat& a = ratMax(lo_, other.lo_);
  const Rat& b = ratMin(hi_, other.hi_);
  if (a < b) return Interval(a, b);
  return std::nullopt;
}

Rat Interval::distance(const Rat& x) const {
  if (x < lo_) return lo_ - x;
  if (x > hi_) return x - hi_;
  return 0;
}

Interval parseInterval(std::string_view text) {
  auto comma = text.find(',');
  if (comma == std::string_view::npos)
    throw Error(ErrorCode::ParseError, "interval must be 'a,b': " + std::string(text));
  return {parseRat(text.substr(0, comma)), parseRat(text.substr(comma + 1))};
}

std::string toString(const Interval& iv) {
  return "[" + toString(iv.lo()) + "," + toString(iv.hi()) + "]";
}

}  // namespace wtc
