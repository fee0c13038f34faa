#include <doctest.h>

#include <random>

#include "wtc/error.hpp"
#include "wtc/measure.hpp"
#include "wtc/measure_io.hpp"
#include "wtc/random.hpp"

using namespace wtc;

namespace {

Interval iv(long a, long b) { return Interval(Rat(a), Rat(b)); }
Rat q(long a, long b) { return ratFrac(a, b); }

template <class F>
ErrorCode codeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Usage;
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parseRat("3/6") == q(1, 2));
  CHECK(parseRat("-0.25") == q(-1, 4));
  CHECK(parseRat("7") == Rat(7));
  CHECK((codeOf([] { parseRat("1/0"); }) == ErrorCode::ParseError));
  CHECK((codeOf([] { parseRat("x"); }) == ErrorCode::ParseError));
  CHECK(toString(q(6, 4)) == "3/2");
  CHECK(fromDouble(0.375) == q(3, 8));
}

TEST_CASE("interval basics") {
  CHECK((codeOf([] { Interval(Rat(1), Rat(1)); }) == ErrorCode::InvalidInterval));
  Interval I = iv(0, 2);
  CHECK((I.dilated(Rat(3)) == iv(-2, 4)));
  CHECK(I.distance(Rat(5)) == 3);
  CHECK(I.distance(Rat(1)) == 0);
  CHECK(!I.intersect(iv(2, 3)));
  CHECK((*I.intersect(iv(1, 3)) == iv(1, 2)));
  CHECK((parseInterval("1/2,3") == Interval(q(1, 2), Rat(3))));
}

TEST_CASE("mass of atoms and steps") {
  CHECK((Measure::atom(2, 3).mass(iv(0, 2)) == 3));
  CHECK((Measure::atom(2, 3).mass(iv(0, 2), Closure::RightOpen) == 0));
  CHECK((Measure::lebesgue(iv(0, 1)).mass(Interval(0, q(1, 2))) == q(1, 2)));
  Measure mixed({{Rat(0), Rat(1)}}, {{iv(0, 1), Rat(1)}});
  CHECK((mixed.mass(iv(-1, 1)) == 2));
  CHECK(mixed.totalMass() == 2);
  CHECK(mixed.massD(-1, 1) == doctest::Approx(2.0));
}

TEST_CASE("restriction") {
  CHECK((Measure::lebesgue(iv(0, 3)).restrict(iv(1, 2)) == Measure::lebesgue(iv(1, 2))));
  CHECK(Measure::atom(5, 2).restrict(iv(0, 1)).empty());
  Measure m({{Rat(1), Rat(1)}}, {{iv(0, 2), Rat(1)}});
  Measure expect({{Rat(1), Rat(1)}}, {{iv(1, 2), Rat(1)}});
  CHECK((m.restrict(iv(1, 2)) == expect));
  CHECK((m.restrict(iv(1, 2)).totalMass() == m.mass(iv(1, 2))));
}

TEST_CASE("moments") {
  auto mo = Measure::lebesgue(iv(0, 1)).moments(iv(0, 1));
  CHECK(mo.mean == q(1, 2));
  CHECK(mo.secondMoment == q(1, 3));
  CHECK((Measure::atom(q(1, 3), 5).moments(iv(0, 1)).mean == q(1, 3)));
  Measure two({{Rat(0), q(1, 2)}, {Rat(1), q(1, 2)}}, {});
  auto m2 = two.moments(iv(0, 1));
  CHECK(m2.mean == q(1, 2));
  CHECK(m2.variance() == q(1, 4));
  CHECK((codeOf([&] { two.moments(iv(3, 4)); }) == ErrorCode::ZeroMass));
}

TEST_CASE("canonical form and validation") {
  Measure a({}, {{iv(0, 1), Rat(2)}, {iv(1, 2), Rat(2)}});
  CHECK((a == Measure({}, {{iv(0, 2), Rat(2)}})));
  Measure b({{Rat(1), Rat(1)}, {Rat(1), Rat(2)}}, {});
  CHECK(b == Measure::atom(1, 3));
  CHECK((codeOf([] { Measure({{Rat(0), Rat(-1)}}, {}); }) == ErrorCode::NegativeMass));
  CHECK((codeOf([] { Measure({}, {{iv(0, 2), Rat(1)}, {iv(1, 3), Rat(1)}}); }) ==
        ErrorCode::OverlappingSteps));
}

TEST_CASE("transforms preserve what they should") {
  Measure m({{q(1, 2), Rat(2)}}, {{iv(0, 1), Rat(3)}});
  CHECK((m.dilated(Rat(4)).totalMass() == m.totalMass()));
  CHECK((m.dilated(Rat(4)).mass(iv(0, 4)) == m.mass(iv(0, 1))));
  CHECK((m.translated(Rat(5)).mass(iv(5, 6)) == m.mass(iv(0, 1))));
  CHECK((m.reflected().mass(iv(-1, 0)) == m.mass(iv(0, 1))));
  CHECK(m.scaled(Rat(2)).totalMass() == 2 * m.totalMass());
  CHECK((m + m) == m.scaled(Rat(2)));
}

TEST_CASE("density queries") {
  Measure m({{Rat(3), Rat(1)}}, {{iv(0, 1), Rat(1)}, {iv(1, 2), Rat(5)}});
  CHECK(m.densityAt(0.5) == 1);
  CHECK(m.densityAt(1.5) == 5);
  CHECK(m.densityAt(2.5) == 0);
  CHECK(m.maxDensityOn(0.2, 1.2) == 5);
  CHECK(m.maxDensityOn(0.2, 0.9) == 1);
  CHECK(m.hasAtomIn(2, 3));
  CHECK(!m.hasAtomIn(2, 3, Closure::RightOpen));
}

TEST_CASE("double and exact mass agree on random measures") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    Measure m = randomMeasure(rng);
    for (long a = -1; a <= 4; ++a)
      for (long b = a + 1; b <= 5; ++b) {
        double exact = m.mass(iv(a, b)).get_d();
        CHECK((m.massD(iv(a, b)) == doctest::Approx(exact).epsilon(1e-12)));
      }
  }
}

TEST_CASE("measure file format") {
  CHECK(parseMeasureFile("# wtc-measure v1\natom 0 1\n") == Measure::atom(0, 1));
  CHECK(parseMeasureFile("# wtc-measure v1\n# comment\nstep 0 1 3/2\n") ==
        Measure({}, {{iv(0, 1), q(3, 2)}}));
  CHECK((codeOf([] { parseMeasureFile("# wtc-measure v1\nstep 0 1 1\nstep 1/2 2 1\n"); }) ==
        ErrorCode::OverlappingSteps));
  CHECK((codeOf([] { parseMeasureFile("atom 0 1\n"); }) == ErrorCode::ParseError));
  CHECK((codeOf([] { parseMeasureFile("# wtc-measure v1\natom 0 -1\n"); }) ==
        ErrorCode::NegativeMass));
  try {
    parseMeasureFile("# wtc-measure v1\natom 0 1\nbogus 1 2\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::ParseError));
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("measure file round trip") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    Measure m = randomMeasure(rng);
    CHECK(parseMeasureFile(writeMeasureFile(m)) == m);
  }
}
