#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "wtc/interval.hpp"
#include "wtc/rational.hpp"

namespace wtc {

struct Atom {
  Rat x;
  Rat mass;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Constant density on a closed support; contributes no point mass anywhere.
struct StepPiece {
  Interval support;
  Rat density;

  Rat mass() const { return density * support.length(); }
  friend bool operator==(const StepPiece&, const StepPiece&) = default;
};

/// Whether the right endpoint of a cell belongs to it. Grid partitions use
/// right-open cells so that masses of sibling cells add up exactly.
enum class Closure { Closed, RightOpen };

/// Exact moments of a restricted measure. `mean` and `secondMoment` are
/// normalized by `mass` (E[x] and E[x^2]).
struct Moments {
  Rat mass;
  Rat mean;
  Rat secondMoment;

  Rat variance() const { return secondMoment - mean * mean; }
};

/// Locally finite positive measure on the line: finitely many atoms plus a
/// step density. Immutable after construction and held in canonical form
/// (sorted, coincident atoms merged, adjacent equal-density pieces merged,
/// zero parts dropped), so equality is structural.
class Measure {
 public:
  Measure();
  /// Throws Error(NegativeMass) or Error(OverlappingSteps).
  Measure(std::vector<Atom> atoms, std::vector<StepPiece> pieces);

  static Measure lebesgue(const Interval& support) { return Measure({}, {{support, Rat(1)}}); }
  static Measure atom(const Rat& x, const Rat& mass) { return Measure({{x, mass}}, {}); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<StepPiece>& pieces() const { return pieces_; }
  bool empty() const { return atoms_.empty() && pieces_.empty(); }
  bool hasAtoms() const { return !atoms_.empty(); }

  /// Convex hull of the support, if nonempty.
  std::optional<Interval> hull() const;

  /// Exact measure of I; atoms on included endpoints count.
  Rat mass(const Interval& iv, Closure closure = Closure::Closed) const;
  Rat totalMass() const;

  /// Floating-point mass of [a,b] or [a,b). Range sums go through a
  /// summation tree, so small masses next to huge ones keep full relative
  /// precision.
  double massD(double a, double b, Closure closure = Closure::Closed) const;
  double massD(const Interval& iv, Closure closure = Closure::Closed) const {
    return massD(iv.loD(), iv.hiD(), closure);
  }

  Measure restrict(const Interval& iv) const;

  /// Throws Error(ZeroMass) if the restricted mass vanishes.
  Moments moments(const Interval& iv, Closure closure = Closure::Closed) const;

  /// Density of the absolutely continuous part at x (right-continuous; at the
  /// right end of the last piece the piece's value).
  double densityAt(double x) const;
  /// Largest density among pieces meeting the open interval (a,b).
  double maxDensityOn(double a, double b) const;
  bool hasAtomIn(double a, double b, Closure closure = Closure::Closed) const;

  /// c * mu.
  Measure scaled(const Rat& c) const;
  /// Push-forward under x -> lambda * x (lambda > 0); total mass unchanged.
  Measure dilated(const Rat& lambda) const;
  /// Push-forward under x -> x + shift.
  Measure translated(const Rat& shift) const;
  /// Push-forward under x -> -x.
  Measure reflected() const;

  friend Measure operator+(const Measure& a, const Measure& b);
  friend bool operator==(const Measure& a, const Measure& b) {
    return a.atoms_ == b.atoms_ && a.pieces_ == b.pieces_;
  }

 private:
  struct Index;
  struct ExactIndex;
  struct ExactCache;

  const ExactIndex& exact() const;

  std::vector<Atom> atoms_;
  std::vector<StepPiece> pieces_;
  std::shared_ptr<const Index> index_;
  std::shared_ptr<ExactCache> exactCache_;
};

}  // namespace wtc
