#include "wtc/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wtc/error.hpp"

namespace wtc {

std::string_view toString(ApKind kind) {
  switch (kind) {
    case ApKind::Classical: return "classical";
    case ApKind::OneTailed: return "oneTailed";
    case ApKind::OneTailedDual: return "oneTailedDual";
    case ApKind::TwoTailed: return "twoTailed";
    case ApKind::Offset: return "offset";
  }
  return "classical";
}

std::optional<ApKind> parseApKind(std::string_view name) {
  for (auto k : {ApKind::Classical, ApKind::OneTailed, ApKind::OneTailedDual, ApKind::TwoTailed,
                 ApKind::Offset})
    if (toString(k) == name) return k;
  return std::nullopt;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// c * integral of t^-beta over [t0, t0 + width], t0 > 0.
double powerTail(double c, double beta, double t0, double width) {
  double r = width / t0;
  if (beta == 1) return c * std::log1p(r);
  double g = 1 - beta;
  return c * std::pow(t0, g) * std::expm1(g * std::log1p(r)) / g;
}

/// Integral of t^-p over [t0, t1] for integer p >= 2.
Rat powerTailExact(const Rat& t0, const Rat& t1, long p) {
  return (ratPow(t0, 1 - p) - ratPow(t1, 1 - p)) / (p - 1);
}

/// Calls f(t0, width, density) for the parts of each piece left and right of
/// [a,b], where t measures from the far endpoint of I.
template <typename F>
void forEachOutsidePart(const Measure& mu, double a, double b, F&& f) {
  for (const auto& piece : mu.pieces()) {
    double u = piece.support.loD(), v = piece.support.hiD();
    double d = piece.density.get_d();
    if (u < a) {
      double top = std::min(v, a);
      f(b - top, top - u, d);
    }
    if (v > b) {
      double bottom = std::max(u, b);
      f(bottom - a, v - bottom, d);
    }
  }
}

template <typename F>
void forEachOutsidePartExact(const Measure& mu, const Interval& iv, F&& f) {
  const Rat& a = iv.lo();
  const Rat& b = iv.hi();
  for (const auto& piece : mu.pieces()) {
    const Rat& u = piece.support.lo();
    const Rat& v = piece.support.hi();
    if (u < a) {
      const Rat& top = ratMin(v, a);
      f(Rat(b - top), Rat(b - u), piece.density);
    }
    if (v > b) {
      const Rat& bottom = ratMax(u, b);
      f(Rat(bottom - a), Rat(v - a), piece.density);
    }
  }
}

double kernel(double L, double d, const PoissonKind& kind) {
  if (kind.kernel == KernelKind::Standard) return L / std::pow(L + d, 2 - kind.alpha);
  return std::pow(L / ((L + d) * (L + d)), 1 - kind.alpha);
}

}  // namespace

double avgDensity(const Measure& mu, const Interval& iv, double alpha) {
  return mu.massD(iv) / std::pow(iv.lengthD(), 1 - alpha);
}

Rat avgDensityExact(const Measure& mu, const Interval& iv) { return mu.mass(iv) / iv.length(); }

double poisson(const Interval& iv, const Measure& mu, PoissonKind kind, bool outsideOnly) {
  const double a = iv.loD(), b = iv.hiD(), L = iv.lengthD();
  double total = outsideOnly ? 0.0 : mu.massD(a, b) * std::pow(L, kind.alpha - 1);
  for (const auto& atom : mu.atoms()) {
    double x = atom.x.get_d();
    if (x < a) total += atom.mass.get_d() * kernel(L, a - x, kind);
    else if (x > b) total += atom.mass.get_d() * kernel(L, x - b, kind);
  }
  double c, beta;
  if (kind.kernel == KernelKind::Standard) {
    c = L;
    beta = 2 - kind.alpha;
  } else {
    c = std::pow(L, 1 - kind.alpha);
    beta = 2 - 2 * kind.alpha;
  }
  forEachOutsidePart(mu, a, b, [&](double t0, double width, double d) {
    total += d * powerTail(c, beta, t0, width);
  });
  return total;
}

Rat poissonExact(const Interval& iv, const Measure& mu, bool outsideOnly) {
  const Rat L = iv.length();
  Rat total = outsideOnly ? Rat(0) : Rat(mu.mass(iv) / L);
  for (const auto& atom : mu.atoms()) {
    if (iv.contains(atom.x)) continue;
    Rat t = L + iv.distance(atom.x);
    total += atom.mass * L / (t * t);
  }
  forEachOutsidePartExact(mu, iv, [&](const Rat& t0, const Rat& t1, const Rat& d) {
    total += d * L * powerTailExact(t0, t1, 2);
  });
  return total;
}

double apLocalPower(const Measure& omega, const Measure& sigma, const Interval& iv,
                    const Exponents& e, ApKind kind) {
  const PoissonKind pk{e.kernel, e.alpha};
  const double q = e.p - 1;
  switch (kind) {
    case ApKind::Classical:
      return avgDensity(omega, iv, e.alpha) * std::pow(avgDensity(sigma, iv, e.alpha), q);
    case ApKind::OneTailed:
      return avgDensity(omega, iv, e.alpha) * std::pow(poisson(iv, sigma, pk), q);
    case ApKind::OneTailedDual:
      return poisson(iv, omega, pk) * std::pow(avgDensity(sigma, iv, e.alpha), q);
    case ApKind::TwoTailed:
      return poisson(iv, omega, pk) * std::pow(poisson(iv, sigma, pk), q);
    case ApKind::Offset:
      return avgDensity(omega, iv, e.alpha) * poisson(iv, sigma, pk, true);
  }
  return 0;
}

double apLocal(const Measure& omega, const Measure& sigma, const Interval& iv, const Exponents& e,
               ApKind kind) {
  double v = apLocalPower(omega, sigma, iv, e, kind);
  return kind == ApKind::Offset ? v : std::pow(v, 1 / e.p);
}

Rat apLocalPowerExact(const Measure& omega, const Measure& sigma, const Interval& iv,
                      ApKind kind) {
  switch (kind) {
    case ApKind::Classical: return avgDensityExact(omega, iv) * avgDensityExact(sigma, iv);
    case ApKind::OneTailed: return avgDensityExact(omega, iv) * poissonExact(iv, sigma);
    case ApKind::OneTailedDual: return poissonExact(iv, omega) * avgDensityExact(sigma, iv);
    case ApKind::TwoTailed: return poissonExact(iv, omega) * poissonExact(iv, sigma);
    case ApKind::Offset: return avgDensityExact(omega, iv) * poissonExact(iv, sigma, true);
  }
  return 0;
}

SupResult supOverFamily(const std::function<double(const Interval&)>& fn,
                        const ScanFamily& family) {
  SupResult out;
  family.forEach([&](const ScanMember& m) {
    double v = fn(m.interval);
    ++out.evaluated;
    if (!out.argmax || v > out.value) {
      out.value = v;
      out.argmax = m.interval;
    }
  });
  return out;
}

double maximalIndicatorIntegral(const Measure& w, const Interval& iv, double p) {
  if (w.hasAtoms()) throw Error(ErrorCode::AtomPresent, "maximal indicator integral needs a weight");
  const double a = iv.loD(), b = iv.hiD(), L = iv.lengthD();
  double total = w.massD(a, b);
  const double c = std::pow(L, p);
  forEachOutsidePart(w, a, b, [&](double t0, double width, double d) {
    total += d * powerTail(c, p, t0, width);
  });
  return total;
}

Rat maximalIndicatorIntegralExact(const Measure& w, const Interval& iv, long p) {
  if (w.hasAtoms()) throw Error(ErrorCode::AtomPresent, "maximal indicator integral needs a weight");
  if (p < 2) throw Error(ErrorCode::ParamDomain, "exact maximal integral needs integer p >= 2");
  const Rat c = ratPow(iv.length(), p);
  Rat total = w.mass(iv);
  forEachOutsidePartExact(w, iv, [&](const Rat& t0, const Rat& t1, const Rat& d) {
    total += d * c * powerTailExact(t0, t1, p);
  });
  return total;
}

namespace {

std::vector<ProfilePoint> extremalPrefixes(const Measure& w, const Interval& iv, int resolution,
                                           int base, double denominator) {
  if (w.hasAtoms()) throw Error(ErrorCode::AtomPresent, "profiles need an atom-free weight");
  if (base != 2 && base != 3) throw Error(ErrorCode::ParamDomain, "grid base must be 2 or 3");
  if (resolution < 0 || std::pow(base, resolution) > 1 << 22)
    throw Error(ErrorCode::FamilyTooLarge, "profile resolution too fine");
  const auto n = static_cast<std::size_t>(std::llround(std::pow(base, resolution)));
  const double a = iv.loD(), L = iv.lengthD();
  std::vector<double> cell(n);
  for (std::size_t k = 0; k < n; ++k) {
    double lo = a + L * static_cast<double>(k) / static_cast<double>(n);
    double hi = k + 1 == n ? iv.hiD() : a + L * static_cast<double>(k + 1) / static_cast<double>(n);
    cell[k] = w.massD(lo, hi, k + 1 == n ? Closure::Closed : Closure::RightOpen);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return cell[i] > cell[j]; });
  std::vector<ProfilePoint> curve;
  curve.reserve(n);
  double acc = 0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += cell[order[k]];
    curve.push_back({static_cast<double>(k + 1) / static_cast<double>(n), acc / denominator});
  }
  return curve;
}

}  // namespace

std::vector<ProfilePoint> cpProfile(const Measure& w, const Interval& iv, double p,
                                    int resolution, int base) {
  return extremalPrefixes(w, iv, resolution, base, maximalIndicatorIntegral(w, iv, p));
}

std::vector<ProfilePoint> aInfinityProfile(const Measure& w, const Interval& iv, int resolution,
                                           int base) {
  double total = w.massD(iv);
  if (total <= 0) throw Error(ErrorCode::ZeroMass, "weight vanishes on " + toString(iv));
  return extremalPrefixes(w, iv, resolution, base, total);
}

double profileSlope(const std::vector<ProfilePoint>& curve) {
  double best = 0;
  for (const auto& pt : curve) best = std::max(best, pt.ratio / pt.size);
  return best;
}

std::optional<ProfilePoint> firstReaching(const std::vector<ProfilePoint>& curve, double target) {
  for (const auto& pt : curve)
    if (pt.ratio >= target) return pt;
  return std::nullopt;
}

namespace {

DoublingResult doublingScan(const Measure& mu, const ScanFamily& family, int factor, bool wantMax) {
  if (factor != 2 && factor != 3) throw Error(ErrorCode::ParamDomain, "doubling factor must be 2 or 3");
  DoublingResult out;
  out.value = wantMax ? 0 : kInf;
  family.forEach([&](const ScanMember& m) {
    const double lo = m.interval.loD(), hi = m.interval.hiD();
    double base = mu.massD(lo, hi);
    if (!(base > 0)) {
      ++out.skipped;
      return;
    }
    ++out.scanned;
    double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo) * factor;
    double r = mu.massD(c - h, c + h) / base;
    if (!out.witness || (wantMax ? r > out.value : r < out.value)) {
      out.value = r;
      out.witness = m.interval;
    }
  });
  return out;
}

}  // namespace

DoublingResult doublingConstant(const Measure& mu, const ScanFamily& family, int factor) {
  return doublingScan(mu, family, factor, true);
}

DoublingResult reverseDoublingConstant(const Measure& mu, const ScanFamily& family, int factor) {
  return doublingScan(mu, family, factor, false);
}

double a1Constant(const Measure& w, const std::vector<double>& samples, const ScanFamily& family) {
  if (w.hasAtoms()) throw Error(ErrorCode::AtomPresent, "A1 constant needs a weight");
  std::vector<double> xs(samples);
  std::sort(xs.begin(), xs.end());
  std::vector<double> best(xs.size(), 0.0);
  family.forEach([&](const ScanMember& m) {
    const double lo = m.interval.loD(), hi = m.interval.hiD();
    auto first = std::lower_bound(xs.begin(), xs.end(), lo);
    auto last = std::upper_bound(xs.begin(), xs.end(), hi);
    if (first == last) return;
    double avg = w.massD(lo, hi) / (hi - lo);
    for (auto it = first; it != last; ++it) {
      auto k = static_cast<std::size_t>(it - xs.begin());
      best[k] = std::max(best[k], avg);
    }
  });
  double out = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    double d = w.densityAt(xs[k]);
    if (!(d > 0)) throw Error(ErrorCode::ZeroDensity, "weight vanishes at sample " + std::to_string(xs[k]));
    out = std::max(out, best[k] / d);
  }
  return out;
}

Rat energyE2(const Interval& iv, const Measure& omega, Closure closure) {
  const Rat L = iv.length();
  return omega.moments(iv, closure).variance() / (L * L);
}

double pivotalSum(const Measure& omega, const Measure& sigma, const Partition& part,
                  const Exponents& e, bool withEnergy) {
  const double s0 = sigma.massD(part.parent);
  if (!(s0 > 0)) throw Error(ErrorCode::ZeroMass, "sigma vanishes on " + toString(part.parent));
  const Measure local = sigma.restrict(part.parent);
  const PoissonKind pk{KernelKind::Standard, e.alpha};
  double total = 0;
  for (const auto& cell : part.cells) {
    double wm = omega.massD(cell.interval, cell.closure());
    if (!(wm > 0)) continue;
    double term = wm * std::pow(poisson(cell.interval, local, pk), e.p);
    if (withEnergy) term *= energyE2(cell.interval, omega, cell.closure()).get_d();
    total += term;
  }
  return total / s0;
}

Rat pivotalSumExact(const Measure& omega, const Measure& sigma, const Partition& part,
                    bool withEnergy) {
  const Rat s0 = sigma.mass(part.parent);
  if (s0 == 0) throw Error(ErrorCode::ZeroMass, "sigma vanishes on " + toString(part.parent));
  const Measure local = sigma.restrict(part.parent);
  Rat total = 0;
  for (const auto& cell : part.cells) {
    Rat wm = omega.mass(cell.interval, cell.closure());
    if (wm == 0) continue;
    Rat pv = poissonExact(cell.interval, local);
    Rat term = wm * pv * pv;
    if (withEnergy) term *= energyE2(cell.interval, omega, cell.closure());
    total += term;
  }
  return total / s0;
}

MaximalResult dyadicMaximalIntegral(const Measure& sigma, const Measure& omega,
                                    const Interval& iv, double p, int maxDepth) {
  MaximalResult out;
  const double rootLo = iv.loD(), rootHi = iv.hiD();
  std::function<void(double, double, int, double)> visit = [&](double lo, double hi, int depth,
                                                                double best) {
    const Closure cl = hi == rootHi ? Closure::Closed : Closure::RightOpen;
    double wm = omega.massD(lo, hi, cl);
    if (!(wm > 0)) return;
    best = std::max(best, sigma.massD(lo, hi, cl) / (hi - lo));
    bool atom = sigma.hasAtomIn(lo, hi, cl);
    if (!atom && sigma.maxDensityOn(lo, hi) <= best) {
      out.value += wm * std::pow(best, p);
      ++out.leaves;
      return;
    }
    if (depth >= maxDepth) {
      if (atom) out.depthExhausted = true;
      out.value += wm * std::pow(best, p);
      ++out.leaves;
      return;
    }
    double mid = 0.5 * (lo + hi);
    visit(lo, mid, depth + 1, best);
    visit(mid, hi, depth + 1, best);
  };
  visit(rootLo, rootHi, 0, 0.0);
  return out;
}

double sawyerRatio(const Measure& omega, const Measure& sigma, const Interval& iv, double p,
                   int maxDepth) {
  double s = sigma.massD(iv);
  if (!(s > 0)) throw Error(ErrorCode::ZeroMass, "sigma vanishes on " + toString(iv));
  return dyadicMaximalIntegral(sigma, omega, iv, p, maxDepth).value / s;
}

RieszResult rieszPotentialSup(const Measure& mu, const Interval& iv, double alpha,
                              const std::vector<double>& samples) {
  if (!(alpha > 0 && alpha < 1)) throw Error(ErrorCode::ParamDomain, "alpha must lie in (0,1)");
  RieszResult out;
  const double a = iv.loD(), b = iv.hiD();
  const double total = mu.massD(a, b);
  if (!(total > 0)) return out;
  struct Seg {
    double u, w, d;
  };
  std::vector<Seg> segs;
  for (const auto& piece : mu.pieces()) {
    double u = std::max(piece.support.loD(), a), w = std::min(piece.support.hiD(), b);
    if (u < w) segs.push_back({u, w, piece.density.get_d()});
  }
  for (double x : samples) {
    double v = 0;
    for (const auto& atom : mu.atoms()) {
      double y = atom.x.get_d();
      if (y < a || y > b) continue;
      if (y == x)
        throw Error(ErrorCode::SingularSample, "sample " + std::to_string(x) + " sits on an atom");
      v += atom.mass.get_d() * std::pow(std::abs(x - y), alpha - 1);
    }
    for (const auto& [u, w, d] : segs) {
      double part;
      if (x <= u) part = std::pow(w - x, alpha) - std::pow(u - x, alpha);
      else if (x >= w) part = std::pow(x - u, alpha) - std::pow(x - w, alpha);
      else part = std::pow(x - u, alpha) + std::pow(w - x, alpha);
      v += d * part / alpha;
    }
    if (!out.argmax || v > out.sup) {
      out.sup = v;
      out.argmax = x;
    }
  }
  out.normalized = out.sup / (total * std::pow(b - a, alpha - 1));
  return out;
}

std::vector<double> midpointSamples(const Interval& iv, int n) {
  std::vector<double> out;
  const double a = iv.loD(), L = iv.lengthD();
  for (int k = 0; k < n; ++k) out.push_back(a + L * (k + 0.5) / n);
  return out;
}

double oneWeightAp(const Measure& w, const Interval& iv, double p) {
  if (w.hasAtoms()) throw Error(ErrorCode::AtomPresent, "one-weight Ap needs a weight");
  const double a = iv.loD(), b = iv.hiD(), L = b - a;
  const double dualExp = 1 - p / (p - 1);
  double mass = 0, dual = 0, covered = 0;
  for (const auto& piece : w.pieces()) {
    double u = std::max(piece.support.loD(), a), v = std::min(piece.support.hiD(), b);
    if (!(u < v)) continue;
    double d = piece.density.get_d();
    mass += d * (v - u);
    dual += std::pow(d, dualExp) * (v - u);
    covered += v - u;
  }
  if (covered < L * (1 - 1e-12)) return kInf;
  return (mass / L) * std::pow(dual / L, p - 1);
}

PowerWeightBound powerWeightApBound(double alphaExp, double p) {
  if (!(p > 1)) throw Error(ErrorCode::ParamDomain, "p must exceed 1");
  if (!(alphaExp > -1 && alphaExp < p - 1)) return {false, kInf};
  const double pp = p / (p - 1);
  return {true, std::pow(alphaExp + 1, -1) * std::pow(1 - alphaExp * pp / p, -p / pp)};
}

}  // namespace wtc
