#include "wtc/measure.hpp"

#include <algorithm>
#include <mutex>

#include "wtc/error.hpp"

namespace wtc {

namespace {

/// Bottom-up segment tree over nonnegative values; range sums never subtract.
class SumTree {
 public:
  SumTree() = default;
  explicit SumTree(const std::vector<double>& values) : n_(values.size()), tree_(2 * n_, 0.0) {
    std::copy(values.begin(), values.end(), tree_.begin() + static_cast<std::ptrdiff_t>(n_));
    for (std::size_t i = n_; i-- > 1;) tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
  }

  /// Sum over [l, r).
  double sum(std::size_t l, std::size_t r) const {
    double left = 0.0, right = 0.0;
    for (l += n_, r += n_; l < r; l >>= 1, r >>= 1) {
      if (l & 1) left += tree_[l++];
      if (r & 1) right += tree_[--r];
    }
    return left + right;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> tree_;
};

}  // namespace

struct Measure::Index {
  std::vector<double> lo, hi, density, pieceMass;
  std::vector<double> atomX, atomMass;
  SumTree pieceTree, atomTree;

  explicit Index(const Measure& m) {
    for (const auto& p : m.pieces_) {
      lo.push_back(p.support.loD());
      hi.push_back(p.support.hiD());
      density.push_back(p.density.get_d());
      pieceMass.push_back(p.mass().get_d());
    }
    for (const auto& a : m.atoms_) {
      atomX.push_back(a.x.get_d());
      atomMass.push_back(a.mass.get_d());
    }
    pieceTree = SumTree(pieceMass);
    atomTree = SumTree(atomMass);
  }

  /// Pieces meeting the open interval (a,b): [first, last).
  std::pair<std::size_t, std::size_t> piecesMeeting(double a, double b) const {
    auto first = static_cast<std::size_t>(std::upper_bound(hi.begin(), hi.end(), a) - hi.begin());
    auto last = static_cast<std::size_t>(std::lower_bound(lo.begin(), lo.end(), b) - lo.begin());
    return {first, std::max(first, last)};
  }
};

struct Measure::ExactIndex {
  std::vector<Rat> cumPiece;  // mass of pieces strictly before i
  std::vector<Rat> cumAtom;   // mass of atoms strictly before i

  explicit ExactIndex(const Measure& m) {
    cumPiece.reserve(m.pieces_.size() + 1);
    cumPiece.emplace_back(0);
    for (const auto& p : m.pieces_) cumPiece.push_back(cumPiece.back() + p.mass());
    cumAtom.reserve(m.atoms_.size() + 1);
    cumAtom.emplace_back(0);
    for (const auto& a : m.atoms_) cumAtom.push_back(cumAtom.back() + a.mass);
  }
};

struct Measure::ExactCache {
  std::once_flag once;
  std::unique_ptr<ExactIndex> index;
};

Measure::Measure()
    : index_(std::make_shared<Index>(*this)), exactCache_(std::make_shared<ExactCache>()) {}

Measure::Measure(std::vector<Atom> atoms, std::vector<StepPiece> pieces) {
  for (const auto& a : atoms)
    if (a.mass < 0) throw Error(ErrorCode::NegativeMass, "atom at " + toString(a.x));
  for (const auto& p : pieces)
    if (p.density < 0) throw Error(ErrorCode::NegativeMass, "piece on " + toString(p.support));

  std::erase_if(atoms, [](const Atom& a) { return a.mass == 0; });
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  for (auto& a : atoms) {
    if (!atoms_.empty() && atoms_.back().x == a.x)
      atoms_.back().mass += a.mass;
    else
      atoms_.push_back(std::move(a));
  }

  std::erase_if(pieces, [](const StepPiece& p) { return p.density == 0; });
  std::sort(pieces.begin(), pieces.end(),
            [](const StepPiece& a, const StepPiece& b) { return a.support.lo() < b.support.lo(); });
  for (auto& p : pieces) {
    if (!pieces_.empty()) {
      auto& prev = pieces_.back();
      if (p.support.lo() < prev.support.hi())
        throw Error(ErrorCode::OverlappingSteps,
                    toString(prev.support) + " and " + toString(p.support));
      if (p.support.lo() == prev.support.hi() && p.density == prev.density) {
        prev.support = Interval(prev.support.lo(), p.support.hi());
        continue;
      }
    }
    pieces_.push_back(std::move(p));
  }
  index_ = std::make_shared<Index>(*this);
  exactCache_ = std::make_shared<ExactCache>();
}

const Measure::ExactIndex& Measure::exact() const {
  std::call_once(exactCache_->once, [this] { exactCache_->index = std::make_unique<ExactIndex>(*this); });
  return *exactCache_->index;
}

std::optional<Interval> Measure::hull() const {
  if (empty()) return std::nullopt;
  std::optional<Rat> lo, hi;
  if (!atoms_.empty()) {
    lo = atoms_.front().x;
    hi = atoms_.back().x;
  }
  if (!pieces_.empty()) {
    const Rat& plo = pieces_.front().support.lo();
    const Rat& phi = pieces_.back().support.hi();
    lo = lo ? ratMin(*lo, plo) : plo;
    hi = hi ? ratMax(*hi, phi) : phi;
  }
  if (*lo == *hi) return Interval(*lo - 1, *hi + 1);  // single atom: any neighbourhood
  return Interval(*lo, *hi);
}

Rat Measure::mass(const Interval& iv, Closure closure) const {
  const auto& ex = exact();
  // Antiderivative of the density: G(x) = integral over (-inf, x].
  auto G = [&](const Rat& x) -> Rat {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](const Rat& v, const StepPiece& p) { return v < p.support.lo(); });
    if (it == pieces_.begin()) return 0;
    auto k = static_cast<std::size_t>(it - pieces_.begin()) - 1;
    const auto& p = pieces_[k];
    const Rat& end = ratMin(x, p.support.hi());
    return ex.cumPiece[k] + p.density * (end - p.support.lo());
  };
  Rat total = G(iv.hi()) - G(iv.lo());

  auto byX = [](const Atom& a, const Rat& v) { return a.x < v; };
  auto first = std::lower_bound(atoms_.begin(), atoms_.end(), iv.lo(), byX);
  auto last = closure == Closure::Closed
                  ? std::upper_bound(atoms_.begin(), atoms_.end(), iv.hi(),
                                     [](const Rat& v, const Atom& a) { return v < a.x; })
                  : std::lower_bound(atoms_.begin(), atoms_.end(), iv.hi(), byX);
  if (first < last)
    total += ex.cumAtom[static_cast<std::size_t>(last - atoms_.begin())] -
             ex.cumAtom[static_cast<std::size_t>(first - atoms_.begin())];
  return total;
}

Rat Measure::totalMass() const {
  const auto& ex = exact();
  return ex.cumPiece.back() + ex.cumAtom.back();
}

double Measure::massD(double a, double b, Closure closure) const {
  const auto& ix = *index_;
  double total = 0.0;
  if (a < b) {
    auto [first, last] = ix.piecesMeeting(a, b);
    if (first < last) {
      auto overlap = [&](std::size_t k) {
        return ix.density[k] * (std::min(b, ix.hi[k]) - std::max(a, ix.lo[k]));
      };
      total += overlap(first);
      if (last - first >= 2) {
        total += overlap(last - 1);
        total += ix.pieceTree.sum(first + 1, last - 1);
      }
    }
  }
  auto lo = std::lower_bound(ix.atomX.begin(), ix.atomX.end(), a);
  auto hi = closure == Closure::Closed ? std::upper_bound(ix.atomX.begin(), ix.atomX.end(), b)
                                       : std::lower_bound(ix.atomX.begin(), ix.atomX.end(), b);
  if (lo < hi)
    total += ix.atomTree.sum(static_cast<std::size_t>(lo - ix.atomX.begin()),
                             static_cast<std::size_t>(hi - ix.atomX.begin()));
  return total;
}

Measure Measure::restrict(const Interval& iv) const {
  std::vector<Atom> atoms;
  for (const auto& a : atoms_)
    if (iv.contains(a.x)) atoms.push_back(a);
  std::vector<StepPiece> pieces;
  for (const auto& p : pieces_)
    if (auto cut = p.support.intersect(iv)) pieces.push_back({*cut, p.density});
  return {std::move(atoms), std::move(pieces)};
}

Moments Measure::moments(const Interval& iv, Closure closure) const {
  Rat m0, m1, m2;
  auto start = std::upper_bound(pieces_.begin(), pieces_.end(), iv.lo(),
                                [](const Rat& v, const StepPiece& p) { return v < p.support.hi(); });
  for (auto it = start; it != pieces_.end(); ++it) {
    const auto& p = *it;
    if (p.support.lo() >= iv.hi()) break;
    const Rat& u = ratMax(p.support.lo(), iv.lo());
    const Rat& v = ratMin(p.support.hi(), iv.hi());
    m0 += p.density * (v - u);
    m1 += p.density * (v * v - u * u) / 2;
    m2 += p.density * (v * v * v - u * u * u) / 3;
  }
  for (const auto& a : atoms_) {
    if (a.x < iv.lo()) continue;
    if (a.x > iv.hi() || (closure == Closure::RightOpen && a.x == iv.hi())) break;
    m0 += a.mass;
    m1 += a.mass * a.x;
    m2 += a.mass * a.x * a.x;
  }
  if (m0 == 0) throw Error(ErrorCode::ZeroMass, "moments on " + toString(iv));
  return {m0, m1 / m0, m2 / m0};
}

double Measure::densityAt(double x) const {
  const auto& ix = *index_;
  auto it = std::upper_bound(ix.lo.begin(), ix.lo.end(), x);
  if (it == ix.lo.begin()) return 0.0;
  auto k = static_cast<std::size_t>(it - ix.lo.begin()) - 1;
  return x <= ix.hi[k] ? ix.density[k] : 0.0;
}

double Measure::maxDensityOn(double a, double b) const {
  const auto& ix = *index_;
  auto [first, last] = ix.piecesMeeting(a, b);
  double best = 0.0;
  for (auto k = first; k < last; ++k) best = std::max(best, ix.density[k]);
  return best;
}

bool Measure::hasAtomIn(double a, double b, Closure closure) const {
  const auto& xs = index_->atomX;
  auto lo = std::lower_bound(xs.begin(), xs.end(), a);
  if (lo == xs.end()) return false;
  return closure == Closure::Closed ? *lo <= b : *lo < b;
}

Measure Measure::scaled(const Rat& c) const {
  std::vector<Atom> atoms;
  for (const auto& a : atoms_) atoms.push_back({a.x, a.mass * c});
  std::vector<StepPiece> pieces;
  for (const auto& p : pieces_) pieces.push_back({p.support, p.density * c});
  return {std::move(atoms), std::move(pieces)};
}

Measure Measure::dilated(const Rat& lambda) const {
  if (lambda <= 0) throw Error(ErrorCode::ParamDomain, "dilation factor must be positive");
  std::vector<Atom> atoms;
  for (const auto& a : atoms_) atoms.push_back({a.x * lambda, a.mass});
  std::vector<StepPiece> pieces;
  for (const auto& p : pieces_) pieces.push_back({p.support.scaled(lambda), p.density / lambda});
  return {std::move(atoms), std::move(pieces)};
}

Measure Measure::translated(const Rat& shift) const {
  std::vector<Atom> atoms;
  for (const auto& a : atoms_) atoms.push_back({a.x + shift, a.mass});
  std::vector<StepPiece> pieces;
  for (const auto& p : pieces_) pieces.push_back({p.support.translated(shift), p.density});
  return {std::move(atoms), std::move(pieces)};
}

Measure Measure::reflected() const {
  std::vector<Atom> atoms;
  for (const auto& a : atoms_) atoms.push_back({-a.x, a.mass});
  std::vector<StepPiece> pieces;
  for (const auto& p : pieces_) pieces.push_back({p.support.scaled(Rat(-1)), p.density});
  return {std::move(atoms), std::move(pieces)};
}

Measure operator+(const Measure& a, const Measure& b) {
  std::vector<Atom> atoms = a.atoms_;
  atoms.insert(atoms.end(), b.atoms_.begin(), b.atoms_.end());

  std::vector<Rat> cuts;
  for (const auto* m : {&a, &b})
    for (const auto& p : m->pieces_) {
      cuts.push_back(p.support.lo());
      cuts.push_back(p.support.hi());
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Both piece lists are sorted and disjoint; walk them alongside the cuts.
  std::vector<StepPiece> pieces;
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const Rat& u = cuts[k];
    const Rat& v = cuts[k + 1];
    Rat density;
    for (auto [m, i] : {std::pair{&a, &ia}, std::pair{&b, &ib}}) {
      const auto& ps = m->pieces_;
      while (*i < ps.size() && ps[*i].support.hi() <= u) ++*i;
      if (*i < ps.size() && ps[*i].support.lo() <= u && v <= ps[*i].support.hi())
        density += ps[*i].density;
    }
    if (density != 0) pieces.push_back({Interval(u, v), density});
  }
  return {std::move(atoms), std::move(pieces)};
}

}  // namespace wtc
