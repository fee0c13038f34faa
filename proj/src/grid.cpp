#include "wtc/grid.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "wtc/error.hpp"

namespace wtc {

namespace {

constexpr std::uint64_t kDefaultCap = 4'000'000;

std::atomic<std::uint64_t>& capStore() {
  static std::atomic<std::uint64_t> cap = [] {
    if (const char* env = std::getenv("WTC_MAX_CANDIDATES")) {
      char* end = nullptr;
      auto v = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return kDefaultCap;
  }();
  return cap;
}

void checkBase(int base) {
  if (base != 2 && base != 3) throw Error(ErrorCode::ParamDomain, "grid base must be 2 or 3");
}

std::int64_t toI64(const BigInt& z) {
  if (!z.fits_slong_p()) throw Error(ErrorCode::FamilyTooLarge, "grid index out of range");
  return z.get_si();
}

Rat cellLength(int base, long level) { return ratPow(Rat(base), level); }

void checkCap(const BigInt& count, const char* what) {
  if (count > BigInt(std::to_string(candidateCap())))
    throw Error(ErrorCode::FamilyTooLarge,
                std::string(what) + " has " + count.get_str() + " members, cap " +
                    std::to_string(candidateCap()));
}

std::vector<Interval> split(const Interval& iv, int base) {
  std::vector<Interval> out;
  Rat step = iv.length() / base;
  Rat lo = iv.lo();
  for (int i = 0; i < base; ++i) {
    Rat hi = i + 1 == base ? iv.hi() : Rat(lo + step);
    out.emplace_back(lo, hi);
    lo = hi;
  }
  return out;
}

Partition makePartition(const Interval& parent, const std::vector<Interval>& cells) {
  Partition p{parent, {}};
  p.cells.reserve(cells.size());
  for (const auto& c : cells) p.cells.push_back({c, c.hi() == parent.hi()});
  return p;
}

}  // namespace

Interval GridRef::interval() const {
  checkBase(base);
  Rat c = cellLength(base, level);
  Rat lo = c * index;
  return {lo, lo + c};
}

GridRef GridRef::parent() const {
  BigInt q;
  BigInt idx(static_cast<long>(index));
  mpz_fdiv_q_ui(q.get_mpz_t(), idx.get_mpz_t(), static_cast<unsigned long>(base));
  return {base, level + 1, toI64(q)};
}

std::vector<GridRef> GridRef::children() const {
  std::vector<GridRef> out;
  for (int i = 0; i < base; ++i) out.push_back({base, level - 1, index * base + i});
  return out;
}

std::uint64_t candidateCap() { return capStore().load(); }
void setCandidateCap(std::uint64_t cap) { capStore().store(cap); }

namespace {

struct LevelRange {
  BigInt kmin, kmax;  // inclusive; empty when kmin > kmax
  Rat offset;
};

std::vector<LevelRange> levelRanges(const ScanFamily& f, long level) {
  Rat c = cellLength(f.base, level);
  std::vector<LevelRange> out;
  for (int j = 0; j < f.shifts; ++j) {
    Rat o = c * j / f.shifts;
    BigInt kmin = ratCeil((f.window.lo() - o) / c);
    BigInt kmax = ratFloor((f.window.hi() - o) / c) - 1;
    out.push_back({kmin, kmax, o});
  }
  return out;
}

}  // namespace

BigInt ScanFamily::projectedCount() const {
  checkBase(base);
  if (minLevel > maxLevel || shifts < 1)
    throw Error(ErrorCode::ParamDomain, "scan family needs minLevel <= maxLevel and shifts >= 1");
  BigInt total = 0;
  for (long level = minLevel; level <= maxLevel; ++level)
    for (const auto& r : levelRanges(*this, level))
      if (r.kmax >= r.kmin) total += r.kmax - r.kmin + 1;
  return total;
}

void ScanFamily::forEach(const std::function<void(const ScanMember&)>& visit) const {
  checkCap(projectedCount(), "scan family");
  for (long level = minLevel; level <= maxLevel; ++level) {
    Rat c = cellLength(base, level);
    auto ranges = levelRanges(*this, level);
    BigInt lo, hi;
    bool any = false;
    for (const auto& r : ranges) {
      if (r.kmax < r.kmin) continue;
      if (!any || r.kmin < lo) lo = r.kmin;
      if (!any || r.kmax > hi) hi = r.kmax;
      any = true;
    }
    if (!any) continue;
    for (std::int64_t k = toI64(lo), kend = toI64(hi); k <= kend; ++k) {
      for (int j = 0; j < shifts; ++j) {
        const auto& r = ranges[static_cast<std::size_t>(j)];
        if (k < r.kmin || k > r.kmax) continue;
        Rat a = r.offset + c * k;
        visit({Interval(a, a + c), level, k, j});
      }
    }
  }
}

std::vector<Interval> ScanFamily::enumerate() const {
  std::vector<Interval> out;
  forEach([&](const ScanMember& m) { out.push_back(m.interval); });
  return out;
}

std::uint64_t partitionCount(int base, int maxDepth) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t c = 1;
  for (int d = 1; d <= maxDepth; ++d) {
    std::uint64_t prod = 1;
    for (int i = 0; i < base; ++i) {
      if (c != 0 && prod > kMax / c) return kMax;
      prod *= c;
    }
    if (prod == kMax) return kMax;
    c = prod + 1;
  }
  return c;
}

namespace {

struct Pending {
  Interval cell;
  int depth;
};

void enumerateFrom(const Interval& parent, std::vector<Pending>& pending, std::size_t next,
                   std::vector<Interval>& chosen, int base,
                   const std::function<void(const Partition&)>& visit) {
  if (next == pending.size()) {
    visit(makePartition(parent, chosen));
    return;
  }
  Pending item = pending[next];
  chosen.push_back(item.cell);
  enumerateFrom(parent, pending, next + 1, chosen, base, visit);
  chosen.pop_back();
  if (item.depth == 0) return;
  std::vector<Pending> expanded(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(next));
  for (const auto& child : split(item.cell, base)) expanded.push_back({child, item.depth - 1});
  expanded.insert(expanded.end(), pending.begin() + static_cast<std::ptrdiff_t>(next) + 1,
                  pending.end());
  enumerateFrom(parent, expanded, next, chosen, base, visit);
}

}  // namespace

void forEachPartition(const Interval& i0, int base, int maxDepth,
                      const std::function<void(const Partition&)>& visit) {
  checkBase(base);
  if (maxDepth < 0) throw Error(ErrorCode::ParamDomain, "partition depth must be >= 0");
  auto count = partitionCount(base, maxDepth);
  if (count > candidateCap())
    throw Error(ErrorCode::FamilyTooLarge, "partition family exceeds cap " +
                                               std::to_string(candidateCap()));
  std::vector<Pending> pending{{i0, maxDepth}};
  std::vector<Interval> chosen;
  enumerateFrom(i0, pending, 0, chosen, base, visit);
}

std::vector<Partition> partitions(const Interval& i0, int base, int maxDepth) {
  std::vector<Partition> out;
  forEachPartition(i0, base, maxDepth, [&](const Partition& p) { out.push_back(p); });
  return out;
}

Partition greedyRefine(const Interval& i0, const std::function<double(const Partition&)>& eval,
                       int maxCells, int base, int maxDepth) {
  checkBase(base);
  std::vector<Interval> cells{i0};
  std::vector<int> depth{0};
  double current = eval(makePartition(i0, cells));
  for (;;) {
    if (static_cast<int>(cells.size()) + base - 1 > maxCells) break;
    double bestValue = current;
    std::optional<std::size_t> bestAt;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (depth[i] >= maxDepth) continue;
      std::vector<Interval> trial(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(i));
      for (const auto& c : split(cells[i], base)) trial.push_back(c);
      trial.insert(trial.end(), cells.begin() + static_cast<std::ptrdiff_t>(i) + 1, cells.end());
      double v = eval(makePartition(i0, trial));
      if (v > bestValue) {
        bestValue = v;
        bestAt = i;
      }
    }
    if (!bestAt) break;
    auto i = static_cast<std::ptrdiff_t>(*bestAt);
    auto kids = split(cells[*bestAt], base);
    int d = depth[*bestAt] + 1;
    cells.erase(cells.begin() + i);
    depth.erase(depth.begin() + i);
    cells.insert(cells.begin() + i, kids.begin(), kids.end());
    depth.insert(depth.begin() + i, kids.size(), d);
    current = bestValue;
  }
  return makePartition(i0, cells);
}

DyadicRoot dyadicRoot(const Interval& iv) {
  Rat len = iv.length();
  const BigInt& num = len.get_num();
  const BigInt& den = len.get_den();
  bool powerOfTwo = (num == 1 && mpz_popcount(den.get_mpz_t()) == 1) ||
                    (den == 1 && mpz_popcount(num.get_mpz_t()) == 1);
  if (powerOfTwo) {
    long level = num == 1 ? -static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2) - 1)
                          : static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2) - 1);
    Rat k = iv.lo() / len;
    if (k.get_den() == 1 && k.get_num().fits_slong_p())
      return {iv, GridRef{2, level, k.get_num().get_si()}, false, false};
  }
  if (iv.lo() < 0 && iv.hi() > 0) return {iv, std::nullopt, false, true};
  long level = static_cast<long>(std::floor(std::log2(iv.lengthD())));
  for (;; ++level) {
    Rat c = cellLength(2, level);
    BigInt k = ratFloor(iv.lo() / c);
    if (Rat(k + 1) * c >= iv.hi()) {
      GridRef ref{2, level, toI64(k)};
      return {ref.interval(), ref, true, false};
    }
  }
}

std::size_t StoppingForest::cubeCount() const {
  std::size_t n = 0;
  for (const auto& l : levels) n += l.size();
  return n;
}

namespace {

struct Node {
  Interval interval;
  std::optional<GridRef> ref;
};

std::vector<Node> halves(const Node& n) {
  auto parts = split(n.interval, 2);
  std::vector<Node> out;
  for (std::size_t i = 0; i < 2; ++i) {
    std::optional<GridRef> r;
    if (n.ref) r = n.ref->children()[i];
    out.push_back({parts[i], r});
  }
  return out;
}

}  // namespace

StoppingForest stoppingCubes(const Measure& sigma, const Interval& iv, double K, int maxDepth) {
  if (!(K > 1)) throw Error(ErrorCode::ParamDomain, "stopping threshold base must exceed 1");
  StoppingForest forest{dyadicRoot(iv), K, 0, {}, Rat(0), false};
  const Interval& root = forest.root.interval;
  const double rootHi = root.hiD();
  auto closureOf = [&](const Interval& c) {
    return c.hi() == root.hi() ? Closure::Closed : Closure::RightOpen;
  };
  double rootAvg = sigma.massD(root) / root.lengthD();
  if (rootAvg <= 0) return forest;
  long m = static_cast<long>(std::ceil(std::log(rootAvg) / std::log(K)));
  while (std::pow(K, m - 1) >= rootAvg) --m;
  while (std::pow(K, m) < rootAvg) ++m;
  forest.firstLevel = m;

  for (int guard = 0; guard < 4096; ++guard, ++m) {
    const double t = std::pow(K, static_cast<double>(m));
    std::vector<StoppingCube> found;
    std::function<void(const Node&, int)> visit = [&](const Node& n, int depth) {
      const double a = n.interval.loD(), b = n.interval.hiD();
      const Closure cl = closureOf(n.interval);
      double avg = sigma.massD(a, b, cl) / (b - a);
      if (avg > t) {
        found.push_back({n.interval, n.ref, sigma.mass(n.interval, cl)});
        return;
      }
      bool atom = sigma.hasAtomIn(a, b, b == rootHi ? Closure::Closed : Closure::RightOpen);
      if (!atom && sigma.maxDensityOn(a, b) <= t) return;
      if (depth >= maxDepth) {
        forest.depthExhausted = true;
        return;
      }
      for (const auto& child : halves(n)) visit(child, depth + 1);
    };
    visit(Node{root, forest.root.ref}, 0);
    if (found.empty()) break;
    for (const auto& c : found) forest.total += c.sigmaMass;
    forest.levels.push_back(std::move(found));
  }
  return forest;
}

SupResult bruteForceSup(const std::function<double(const Interval&)>& fn, const Interval& window,
                        long q) {
  if (q < 1) throw Error(ErrorCode::ParamDomain, "lattice denominator must be positive");
  BigInt first = ratCeil(window.lo() * q);
  BigInt last = ratFloor(window.hi() * q);
  BigInt n = last - first + 1;
  BigInt count = n > 1 ? BigInt(n * (n - 1) / 2) : BigInt(0);
  checkCap(count, "lattice family");
  SupResult out;
  const std::int64_t a0 = toI64(first), a1 = toI64(last);
  for (std::int64_t a = a0; a <= a1; ++a) {
    for (std::int64_t b = a + 1; b <= a1; ++b) {
      Interval iv(ratFrac(a, q), ratFrac(b, q));
      double v = fn(iv);
      ++out.evaluated;
      if (!out.argmax || v > out.value) {
        out.value = v;
        out.argmax = iv;
      }
    }
  }
  return out;
}

}  // namespace wtc
