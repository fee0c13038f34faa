#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "wtc/constructions.hpp"
#include "wtc/error.hpp"
#include "wtc/functionals.hpp"
#include "wtc/grid.hpp"

using namespace wtc;

namespace {

Interval iv(long a, long b) { return Interval(Rat(a), Rat(b)); }
Rat q(long a, long b) { return ratFrac(a, b); }

bool has(const std::vector<Interval>& v, const Interval& I) {
  return std::find(v.begin(), v.end(), I) != v.end();
}

}  // namespace

TEST_CASE("grid cells") {
  GridRef g{2, -1, 3};
  CHECK((g.interval() == Interval(q(3, 2), Rat(2))));
  CHECK(g.parent() == GridRef{2, 0, 1});
  auto kids = GridRef{3, 0, 0}.children();
  REQUIRE(kids.size() == 3);
  CHECK((kids[1].interval() == Interval(q(1, 3), q(2, 3))));
  CHECK(GridRef{2, 0, -1}.parent() == GridRef{2, 1, -1});
}

TEST_CASE("scan family members") {
  auto a = ScanFamily{iv(0, 1), -1, 0, 2, 1}.enumerate();
  CHECK(a.size() == 3);
  CHECK(has(a, iv(0, 1)));
  CHECK(has(a, Interval(0, q(1, 2))));
  CHECK(has(a, Interval(q(1, 2), 1)));

  auto b = ScanFamily{iv(0, 3), 0, 1, 3, 1}.enumerate();
  CHECK(b.size() == 4);
  CHECK(has(b, iv(0, 3)));
  CHECK(has(b, iv(1, 2)));

  auto c = ScanFamily{iv(0, 2), 0, 0, 2, 2}.enumerate();
  CHECK(has(c, Interval(q(1, 2), q(3, 2))));
  CHECK(c.size() == 3);
}

TEST_CASE("projected count matches enumeration") {
  for (const auto& fam : {ScanFamily{iv(-3, 5), -3, 2, 2, 3}, ScanFamily{Interval(q(-9, 2), q(9, 2)), -2, 1, 3, 6},
                          ScanFamily{iv(0, 1), 0, 0, 2, 1}})
    CHECK(fam.projectedCount() == BigInt(static_cast<long>(fam.enumerate().size())));
}

TEST_CASE("scan family order and containment") {
  ScanFamily fam{iv(-1, 2), -2, 1, 2, 3};
  long lastLevel = fam.minLevel;
  fam.forEach([&](const ScanMember& m) {
    CHECK(fam.window.contains(m.interval));
    CHECK(m.level >= lastLevel);
    lastLevel = m.level;
  });
}

TEST_CASE("candidate cap") {
  auto saved = candidateCap();
  setCandidateCap(10);
  ScanFamily big{iv(0, 64), -2, 0, 2, 1};
  try {
    big.forEach([](const ScanMember&) {});
    FAIL("expected FamilyTooLarge");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::FamilyTooLarge));
  }
  setCandidateCap(saved);
}

TEST_CASE("partition enumeration") {
  CHECK((partitions(iv(0, 1), 2, 0).size() == 1));
  auto d1 = partitions(iv(0, 1), 2, 1);
  REQUIRE(d1.size() == 2);
  std::set<std::size_t> sizes{d1[0].cells.size(), d1[1].cells.size()};
  CHECK(sizes == std::set<std::size_t>{1, 2});
  // c(d) = 1 + c(d-1)^2 for base 2, c(d) = 1 + c(d-1)^3 for base 3
  CHECK((partitions(iv(0, 1), 2, 2).size() == 5));
  CHECK((partitions(iv(0, 1), 2, 3).size() == 26));
  CHECK((partitions(iv(0, 1), 3, 2).size() == 9));
  CHECK(partitionCount(2, 4) == 677);
}

TEST_CASE("partitions cover the parent exactly") {
  Measure m({{Rat(0), Rat(1)}, {Rat(1), Rat(2)}, {q(1, 2), Rat(3)}}, {{iv(0, 1), Rat(1)}});
  for (const auto& p : partitions(iv(0, 1), 2, 3)) {
    Rat sum = 0;
    for (const auto& c : p.cells) sum += m.mass(c.interval, c.closure());
    CHECK((sum == m.mass(iv(0, 1))));
    CHECK(p.cells.back().closedRight);
  }
}

TEST_CASE("greedy refinement") {
  auto flat = greedyRefine(iv(0, 1), [](const Partition&) { return 1.0; }, 8);
  CHECK(flat.cells.size() == 1);
  auto one = greedyRefine(iv(0, 1), [](const Partition& p) { return double(p.cells.size()); }, 1);
  CHECK(one.cells.size() == 1);

  auto c = pivotalExamplePair(10);
  const Interval i0(Rat(-1), q(21, 2));
  auto score = [&](const Partition& p) { return pivotalSum(c.measure, *c.sigma, p, {}, false); };
  auto g = greedyRefine(i0, score, 16);
  double depth1 = 0;
  for (const auto& p : partitions(i0, 2, 1)) depth1 = std::max(depth1, score(p));
  CHECK(score(g) >= depth1);
}

TEST_CASE("dyadic roots") {
  auto r = dyadicRoot(Interval(q(1, 2), Rat(1)));
  CHECK(r.ref);
  CHECK(!r.snapped);
  auto s = dyadicRoot(Interval(q(1, 4), q(3, 4)));
  CHECK(s.snapped);
  CHECK((s.interval == iv(0, 1)));
  auto t = dyadicRoot(iv(-1, 2));
  CHECK(t.local);
  CHECK((t.interval == iv(-1, 2)));
}

TEST_CASE("stopping cubes") {
  auto flat = stoppingCubes(Measure::lebesgue(iv(0, 1)), iv(0, 1), 4, 12);
  CHECK(flat.cubeCount() == 0);
  CHECK(flat.total == 0);

  // every dyadic ancestor of 1/3 at depth j has average 2^j
  auto atom = stoppingCubes(Measure::atom(q(1, 3), Rat(1)), iv(0, 1), 2, 10);
  CHECK(atom.cubeCount() == 10);
  CHECK(atom.total == 10);
  auto deeper = stoppingCubes(Measure::atom(q(1, 3), Rat(1)), iv(0, 1), 2, 14);
  CHECK(deeper.total > atom.total);

  Measure bump({}, {{Interval(0, q(1, 2)), Rat(1)}, {Interval(q(1, 2), 1), Rat(8)}});
  auto f = stoppingCubes(bump, iv(0, 1), 16, 12);
  CHECK(f.total <= 2 * bump.mass(iv(0, 1)));
}

TEST_CASE("stopping cubes are maximal and exceed their threshold") {
  Measure s({{q(3, 8), Rat(1)}},
            {{Interval(0, q(1, 8)), Rat(1)}, {Interval(q(1, 8), q(1, 4)), Rat(7)}, {Interval(q(1, 4), 1), Rat(1)}});
  auto f = stoppingCubes(s, iv(0, 1), 2, 10);
  for (std::size_t j = 0; j < f.levels.size(); ++j) {
    double threshold = std::pow(f.K, double(f.firstLevel + long(j)));
    for (const auto& c : f.levels[j]) {
      CHECK(c.sigmaMass.get_d() / c.interval.lengthD() > threshold);
      CHECK(c.ref);
      // the parent does not exceed the threshold, unless it is outside the root
      auto parent = c.ref->parent().interval();
      if (iv(0, 1).contains(parent))
        CHECK(s.mass(parent, Closure::RightOpen).get_d() / parent.lengthD() <= threshold + 1e-12);
    }
  }
}

TEST_CASE("brute force sup") {
  auto r = bruteForceSup([](const Interval&) { return 3.5; }, iv(0, 1), 4);
  CHECK(r.value == 3.5);
  CHECK(r.evaluated == 10);
  Measure m = Measure::lebesgue(iv(0, 1));
  auto a = bruteForceSup([&](const Interval& I) { return avgDensity(m, I); }, Interval(0, 2), 4);
  CHECK(a.value == doctest::Approx(1));
}
