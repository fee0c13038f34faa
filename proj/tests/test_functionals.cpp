#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "wtc/constructions.hpp"
#include "wtc/error.hpp"
#include "wtc/functionals.hpp"
#include "wtc/random.hpp"

using namespace wtc;

namespace {

Interval iv(long a, long b) { return Interval(Rat(a), Rat(b)); }
Rat q(long a, long b) { return ratFrac(a, b); }

// Composite Simpson on [a,b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n = 2000) {
  double h = (b - a) / n, s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4 : 2);
  return s * h / 3;
}

// Integral of g against mu, piece by piece, atoms exactly.  Pieces are split at
// the kinks of g so Simpson stays accurate.
template <class F>
double integrate(const Measure& mu, F g, std::vector<double> kinks = {}) {
  double out = 0;
  for (const auto& a : mu.atoms()) out += a.mass.get_d() * g(a.x.get_d());
  for (const auto& p : mu.pieces()) {
    std::vector<double> cuts{p.support.loD()};
    for (double k : kinks)
      if (k > cuts.front() && k < p.support.hiD()) cuts.push_back(k);
    cuts.push_back(p.support.hiD());
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
      out += p.density.get_d() * simpson(g, cuts[j], cuts[j + 1]);
  }
  return out;
}

double kernel(const Interval& I, double x) {
  double a = I.loD(), b = I.hiD(), L = b - a;
  double d = x < a ? a - x : (x > b ? x - b : 0);
  return L / ((L + d) * (L + d));
}

// 1D maximal function of the indicator of I.
double maximalOfIndicator(const Interval& I, double x) {
  double a = I.loD(), b = I.hiD();
  if (x >= a && x <= b) return 1;
  return x > b ? (b - a) / (x - a) : (b - a) / (b - x);
}

}  // namespace

TEST_CASE("averages") {
  CHECK((avgDensity(Measure::lebesgue(iv(0, 1)), iv(0, 1)) == 1));
  const Interval half(q(-1, 2), q(1, 2));
  CHECK(avgDensity(Measure::atom(0, 1), half) == 1);
  CHECK(avgDensity(Measure::atom(0, 1), half, 0.5) == doctest::Approx(1));
  CHECK((avgDensity(Measure::atom(0, 1), iv(-2, 2), 0.5) == doctest::Approx(1.0 / 2)));
  CHECK((avgDensityExact(Measure::lebesgue(iv(0, 4)), iv(1, 3)) == 1));
}

TEST_CASE("poisson closed forms") {
  CHECK((poissonExact(iv(0, 1), Measure::lebesgue(iv(-10, 11))) == q(31, 11)));
  CHECK((poisson(iv(0, 1), Measure::lebesgue(iv(-10, 11))) == doctest::Approx(31.0 / 11)));
  CHECK((poissonExact(iv(0, 1), Measure::atom(2, 1)) == q(1, 4)));
  CHECK((poisson(iv(0, 1), Measure()) == 0));
  CHECK((poissonExact(iv(0, 1), Measure::atom(q(1, 2), 3), true) == 0));
}

TEST_CASE("poisson matches quadrature on random measures") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    Measure mu = randomMeasure(rng);
    for (const auto& I : {iv(0, 1), Interval(q(1, 2), q(5, 2)), iv(-3, 1)}) {
      double oracle = integrate(mu, [&](double x) { return kernel(I, x); }, {I.loD(), I.hiD()});
      CHECK(poisson(I, mu) == doctest::Approx(oracle).epsilon(1e-9));
      CHECK(poissonExact(I, mu).get_d() == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("ap functionals on simple pairs") {
  Measure leb = Measure::lebesgue(iv(-10, 11));
  CHECK((apLocal(leb, leb, iv(0, 1), {}, ApKind::Classical) == doctest::Approx(1)));
  CHECK((apLocalPowerExact(leb, leb, iv(3, 5), ApKind::Classical) == 1));

  auto c = pivotalExamplePair(10);
  double h = 0;
  for (int n = 2; n <= 10; ++n) h += 1.0 / n;
  CHECK((apLocalPower(c.measure, *c.sigma, iv(0, 1), {}, ApKind::OneTailed) == doctest::Approx(h)));
  CHECK((apLocal(c.measure, *c.sigma, iv(0, 1), {}, ApKind::OneTailed) ==
        doctest::Approx(std::sqrt(h))));
  CHECK(std::sqrt(h) == doctest::Approx(1.389).epsilon(1e-3));
}

TEST_CASE("ap kind monotonicity holds exactly") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    Measure w = randomMeasure(rng), s = randomMeasure(rng);
    for (const auto& I : ScanFamily{iv(-1, 5), -2, 1, 2, 2}.enumerate()) {
      Rat c = apLocalPowerExact(w, s, I, ApKind::Classical);
      Rat o = apLocalPowerExact(w, s, I, ApKind::OneTailed);
      Rat d = apLocalPowerExact(w, s, I, ApKind::OneTailedDual);
      Rat t2 = apLocalPowerExact(w, s, I, ApKind::TwoTailed);
      CHECK(c <= o);
      CHECK(c <= d);
      CHECK(o <= t2);
      CHECK(d <= t2);
      CHECK(poissonExact(I, w) >= avgDensityExact(w, I));
    }
  }
}

TEST_CASE("scale invariance under joint dilation") {
  std::mt19937_64 rng(9);
  const Rat lambda = q(7, 3);
  for (int t = 0; t < 10; ++t) {
    Measure w = randomMeasure(rng), s = randomMeasure(rng);
    Measure wd = w.dilated(lambda).scaled(lambda), sd = s.dilated(lambda).scaled(lambda);
    const Interval I(q(1, 2), Rat(3));
    const Interval J = I.scaled(lambda);
    for (auto kind : {ApKind::Classical, ApKind::OneTailed, ApKind::TwoTailed})
      CHECK(apLocalPowerExact(w, s, I, kind) == apLocalPowerExact(wd, sd, J, kind));
    if (w.mass(I) > 0) CHECK(energyE2(I, w) == energyE2(J, wd));
  }
}

TEST_CASE("float and exact paths agree") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 40; ++t) {
    Measure w = randomMeasure(rng), s = randomMeasure(rng);
    for (const auto& I : {iv(0, 1), iv(1, 3), Interval(q(1, 8), q(29, 8))})
      for (auto kind : {ApKind::Classical, ApKind::OneTailed, ApKind::OneTailedDual,
                        ApKind::TwoTailed, ApKind::Offset}) {
        double exact = apLocalPowerExact(w, s, I, kind).get_d();
        CHECK(apLocalPower(w, s, I, {}, kind) == doctest::Approx(exact).epsilon(1e-12));
      }
  }
}

TEST_CASE("parse ap kinds") {
  for (auto k : {ApKind::Classical, ApKind::OneTailed, ApKind::OneTailedDual, ApKind::TwoTailed,
                 ApKind::Offset})
    CHECK((parseApKind(toString(k)) == k));
  CHECK(!parseApKind("nope"));
}

TEST_CASE("maximal indicator integral") {
  CHECK((maximalIndicatorIntegral(Measure::lebesgue(iv(-10, 11)), iv(0, 1), 2) ==
        doctest::Approx(31.0 / 11)));
  CHECK((maximalIndicatorIntegralExact(Measure::lebesgue(iv(-10, 11)), iv(0, 1), 2) == q(31, 11)));
  CHECK((maximalIndicatorIntegral(Measure::lebesgue(iv(0, 1)), iv(0, 1), 2) == doctest::Approx(1)));
  CHECK_THROWS_AS(maximalIndicatorIntegral(Measure::atom(0, 1), iv(0, 1), 2), Error);

  std::mt19937_64 rng(21);
  RandomMeasureSpec spec;
  spec.maxAtoms = 0;
  for (int t = 0; t < 20; ++t) {
    Measure w = randomMeasure(rng, spec);
    if (w.empty()) continue;
    for (double p : {2.0, 3.0, 1.5}) {
      const Interval I(q(1, 2), Rat(2));
      double oracle =
          integrate(w, [&](double x) { return std::pow(maximalOfIndicator(I, x), p); }, {I.loD(), I.hiD()});
      CHECK(maximalIndicatorIntegral(w, I, p) == doctest::Approx(oracle).epsilon(1e-8));
    }
    const Interval I(q(1, 4), Rat(3));
    CHECK(maximalIndicatorIntegralExact(w, I, 3).get_d() ==
          doctest::Approx(maximalIndicatorIntegral(w, I, 3)).epsilon(1e-12));
  }
}

TEST_CASE("profiles") {
  Measure leb = Measure::lebesgue(iv(0, 1));
  for (const auto& pt : aInfinityProfile(leb, iv(0, 1), 3)) CHECK(pt.ratio == doctest::Approx(pt.size));
  for (const auto& pt : cpProfile(leb, iv(0, 1), 2, 3)) CHECK(pt.ratio <= pt.size + 1e-12);

  Measure gap({}, {{Interval(0, q(1, 2)), Rat(2)}});
  auto curve = aInfinityProfile(gap, iv(0, 1), 1);
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].ratio == doctest::Approx(1));
  CHECK(curve[1].ratio == doctest::Approx(1));
  CHECK(profileSlope(curve) == doctest::Approx(2));

  // the cascade concentrates: half the mass sits on a shrinking set
  auto fracAt = [](int depth) {
    auto c = aInfinityProfile(gksCascade({q(1, 4), depth}), iv(0, 1), depth, 3);
    return firstReaching(c, 0.5)->size;
  };
  CHECK(fracAt(6) < fracAt(3));
}

TEST_CASE("doubling constants") {
  Measure leb = Measure::lebesgue(iv(-4, 4));
  ScanFamily inner{iv(-1, 1), -4, -1, 2, 2};
  CHECK(doublingConstant(leb, inner, 2).value == doctest::Approx(2));
  CHECK(reverseDoublingConstant(leb, inner, 2).value == doctest::Approx(2));

  Measure mu = gksCascade({q(1, 4), 8});
  ScanFamily mid{Interval(q(1, 3), q(2, 3)), -5, -1, 3, 3};
  double d3 = doublingConstant(mu, mid, 3).value;
  CHECK(d3 <= 9 / std::min(0.25, 0.375));
  CHECK(reverseDoublingConstant(mu, mid, 3).value > 1);

  auto atom = [](long levels) {
    Measure m = Measure::lebesgue(iv(-2, 2)) + Measure::atom(0, 1);
    return doublingConstant(m, ScanFamily{iv(-1, 1), -levels, 0, 2, 3}, 2).value;
  };
  CHECK(atom(6) > atom(3));

  auto r = doublingConstant(remark2Weight(Rat(8)), ScanFamily{iv(-1, 1), -1, 1, 2, 1}, 2);
  CHECK(r.skipped > 0);
}

TEST_CASE("A1 constants") {
  ScanFamily fam{iv(-1, 1), -8, 1, 2, 2};
  std::vector<double> samples{-0.7, -0.3, 0.2, 0.55};
  CHECK((a1Constant(Measure::lebesgue(iv(-1, 1)), samples, fam) == doctest::Approx(1)));
  auto growth = [&](double a) {
    Measure w = powerWeight(a, iv(-1, 1), 12);
    double far = a1Constant(w, {0.5}, fam), near = a1Constant(w, {std::ldexp(1.0, -9)}, fam);
    return near / far;
  };
  CHECK(growth(0.5) > 4);
  CHECK(growth(-0.5) < 2.5);
  CHECK_THROWS_AS(a1Constant(Measure::lebesgue(iv(0, 1)), {2.0}, fam), Error);
}

TEST_CASE("energy") {
  CHECK((energyE2(iv(0, 1), Measure::atom(q(1, 3), 1)) == 0));
  CHECK((energyE2(iv(0, 1), Measure::lebesgue(iv(0, 1))) == q(1, 12)));
  CHECK((energyE2(iv(2, 5), Measure::lebesgue(iv(0, 9))) == q(1, 12)));
  Measure ends({{Rat(0), q(1, 2)}, {Rat(1), q(1, 2)}}, {});
  CHECK((energyE2(iv(0, 1), ends) == q(1, 4)));
  CHECK((energyE2(iv(0, 1), ends, Closure::RightOpen) == 0));
}

TEST_CASE("pivotal sums") {
  auto c = pivotalExamplePair(10);
  const Interval i0(Rat(-1), q(21, 2));
  Partition part{i0, {{Interval(Rat(-1), q(1, 2)), false}, {Interval(q(1, 2), q(21, 2)), true}}};
  double s = 0;
  for (int n = 2; n <= 10; ++n) s += 1.5 * n / double((n + 1) * (n + 1));
  double oracle = s * s / 54;
  CHECK(oracle == doctest::Approx(0.061).epsilon(0.01));
  CHECK(pivotalSum(c.measure, *c.sigma, part, {}, false) == doctest::Approx(oracle));
  CHECK(pivotalSumExact(c.measure, *c.sigma, part, false).get_d() == doctest::Approx(oracle));

  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    Measure w = randomMeasure(rng), sg = randomMeasure(rng);
    const Interval I = iv(0, 4);
    if (sg.mass(I) == 0) continue;
    Partition single{I, {{I, true}}};
    // single-cube decomposition dominates the classical constant
    double classical = apLocalPower(w, sg, I, {}, ApKind::Classical);
    CHECK(pivotalSum(w, sg, single, {}, false) >= classical * (1 - 1e-12));
    for (const auto& p : partitions(I, 2, 3)) {
      Rat plain = pivotalSumExact(w, sg, p, false);
      CHECK(pivotalSumExact(w, sg, p, true) * 2 <= plain);
    }
  }
  CHECK_THROWS_AS(pivotalSum(c.measure, *c.sigma, Partition{iv(20, 21), {{iv(20, 21), true}}}, {}, false),
                  Error);
}

TEST_CASE("dyadic maximal integral") {
  Measure leb = Measure::lebesgue(iv(0, 1));
  CHECK((dyadicMaximalIntegral(leb, leb, iv(0, 1), 2, 8).value == doctest::Approx(1)));
  CHECK((sawyerRatio(leb, leb, iv(0, 1), 2, 8) == doctest::Approx(1)));

  // points whose deepest common dyadic ancestor with 1/3 sits at depth j see 2^j
  for (int d : {4, 6, 10}) {
    double oracle = std::ldexp(1.0, d);
    for (int j = 0; j < d; ++j) oracle += std::ldexp(1.0, 2 * j) * std::ldexp(1.0, -j - 1);
    auto r = dyadicMaximalIntegral(Measure::atom(q(1, 3), 1), leb, iv(0, 1), 2, d);
    CHECK(r.value == doctest::Approx(oracle));
  }
}

TEST_CASE("riesz potential") {
  Measure leb = Measure::lebesgue(iv(0, 1));
  auto r = rieszPotentialSup(leb, iv(0, 1), 0.5, {0.5});
  CHECK(r.sup == doctest::Approx(2 * std::sqrt(2.0)));
  CHECK((rieszPotentialSup(Measure(), iv(0, 1), 0.5, {0.5}).sup == 0));
  CHECK_THROWS_AS(rieszPotentialSup(Measure::atom(q(1, 2), 1), iv(0, 1), 0.5, {0.5}), Error);
  auto samples = midpointSamples(iv(0, 1), 4);
  CHECK(samples == std::vector<double>{0.125, 0.375, 0.625, 0.875});
}

TEST_CASE("one weight Ap of power weights") {
  auto b0 = powerWeightApBound(0, 2);
  CHECK(b0.finite);
  CHECK(b0.value == doctest::Approx(1));
  CHECK(!powerWeightApBound(1, 2).finite);
  CHECK(!powerWeightApBound(-1, 2).finite);
  auto b = powerWeightApBound(0.5, 2);
  REQUIRE(b.finite);
  CHECK(b.value == doctest::Approx(4.0 / 3));

  Measure w = powerWeight(0.5, iv(-1, 1), 10);
  auto sup = supOverFamily([&](const Interval& I) { return oneWeightAp(w, I, 2); },
                           ScanFamily{iv(-1, 1), -6, 1, 2, 2});
  CHECK(sup.value <= 4 * b.value);
  CHECK(sup.value >= b.value / 4);
  CHECK(std::isinf(oneWeightAp(Measure::lebesgue(iv(0, 1)), iv(0, 2), 2)));
}
