#include "wtc/claims.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>

#include "wtc/error.hpp"
#include "wtc/functionals.hpp"
#include "wtc/grid.hpp"
#include "wtc/random.hpp"

namespace wtc {

std::string_view toString(Expect e) {
  switch (e) {
    case Expect::Bounded: return "BOUNDED";
    case Expect::Stable: return "STABLE";
    case Expect::Divergent: return "DIVERGENT";
    case Expect::AtMost:
    case Expect::AtLeast: return "HOLDS";
    case Expect::Inconclusive: return "INCONCLUSIVE";
    case Expect::Report: return "INFO";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Value {
  double value = 0;
  std::optional<double> bound;
  std::optional<Expect> expect;  // overrides the registry expectation
};

struct Sample {
  std::map<std::string, Value> stats;
  std::vector<NamedInterval> witnesses;
  std::vector<std::string> notes;

  void set(const std::string& name, double v, std::optional<double> bound = std::nullopt,
           std::optional<Expect> expect = std::nullopt) {
    stats[name] = Value{v, bound, expect};
  }
};

using Evaluator = std::function<Sample(const std::string& size, const Config& cfg)>;
using Sizer = std::function<std::vector<std::string>(const std::string& scale)>;

struct ClaimDef {
  ClaimInfo info;
  Sizer sizes;
  Evaluator eval;
};

long parseLongParam(const std::string& s, long lo, long hi) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw Error(ErrorCode::ParamDomain, "expected an integer, got '" + s + "'");
  if (v < lo || v > hi)
    throw Error(ErrorCode::CapExceeded,
                s + " outside " + std::to_string(lo) + ".." + std::to_string(hi));
  return v;
}

double parseDoubleParam(const std::string& s) {
  try {
    return parseRat(s).get_d();
  } catch (const Error&) {
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw Error(ErrorCode::ParamDomain, "expected a number, got '" + s + "'");
  return v;
}

Sizer timesSizer(long factor, long lo, long hi) {
  return [=](const std::string& scale) {
    long v = parseLongParam(scale, lo, hi);
    if (v * factor > hi) throw Error(ErrorCode::CapExceeded, "scale too large: " + scale);
    return std::vector<std::string>{std::to_string(v), std::to_string(v * factor)};
  };
}

Sizer plusSizer(long step, long lo, long hi) {
  return [=](const std::string& scale) {
    long v = parseLongParam(scale, lo, hi);
    if (v + step > hi) throw Error(ErrorCode::CapExceeded, "scale too large: " + scale);
    return std::vector<std::string>{std::to_string(v), std::to_string(v + step)};
  };
}

SupResult supAp(const Measure& omega, const Measure& sigma, const ScanFamily& fam, ApKind kind) {
  const Exponents e{};
  return supOverFamily([&](const Interval& I) { return apLocalPower(omega, sigma, I, e, kind); },
                       fam);
}

void keepMax(double& best, std::optional<Interval>& where, double v,
             const std::optional<Interval>& at) {
  if (v > best) {
    best = v;
    where = at;
  }
}

Interval iv(long a, long b) { return Interval(Rat(a), Rat(b)); }
Interval iv(const Rat& a, const Rat& b) { return Interval(a, b); }

// ---------------------------------------------------------------------------

double classicalPeak() {
  // max over i of (4^{i+1}-1) / (3 (2^{i-1}-2)^2); i = 2 is excluded.
  double best = 0;
  for (int i = 0; i <= 60; ++i) {
    if (i == 2) continue;
    double d = std::ldexp(1.0, i - 1) - 2;
    best = std::max(best, (std::ldexp(1.0, 2 * i + 2) - 1) / (3 * d * d));
  }
  return best;
}

Sample apNotT1(const std::string& size, const Config&) {
  int K = static_cast<int>(parseLongParam(size, 1, 6));
  auto c = thm5Part1Pair(K);
  const Measure& w = c.measure;
  const Measure& s = *c.sigma;
  Sample out;
  double best = 0;
  std::optional<Interval> at;
  for (const auto& [name, fam] : c.families) {
    auto r = supAp(w, s, fam, ApKind::Classical);
    keepMax(best, at, r.value, r.argmax);
  }
  out.set("classicalSup", best, 2 * classicalPeak());
  if (at) out.witnesses.push_back({"classicalArgmax", *at});
  const Exponents e{};
  const auto& ik = c.witness("I" + size);
  const auto& jk = c.witness("Idual" + size);
  out.set("t1", apLocalPower(w, s, ik, e, ApKind::OneTailed));
  out.set("t1Dual", apLocalPower(w, s, jk, e, ApKind::OneTailedDual));
  out.witnesses.push_back({"I" + size, ik});
  out.witnesses.push_back({"Idual" + size, jk});
  return out;
}

Sample t1NotT2(const std::string& size, const Config&) {
  int N = static_cast<int>(parseLongParam(size, 1, 20));
  auto c = thm5Part2Pair(N);
  Sample out;
  auto r = supAp(c.measure, *c.sigma, c.families.front().second, ApKind::OneTailed);
  double M = (std::pow(4.0, N + 2) - 1) / (3 * std::pow(4.0, N));
  out.set("t1Sup", r.value, std::max(M, 5.0));
  if (r.argmax) out.witnesses.push_back({"t1Argmax", *r.argmax});
  out.set("t2", apLocalPower(c.measure, *c.sigma, c.witness("I"), Exponents{}, ApKind::TwoTailed));
  out.witnesses.push_back({"I", c.witness("I")});
  return out;
}

// Best one-tailed value over the dilates 3^k I, both orientations.
double ringWitness(const Measure& w, const Measure& s, const Interval& I, int maxK,
                   std::optional<Interval>& at) {
  const Exponents e{};
  double best = 0;
  Interval J = I;
  for (int k = 0; k <= maxK; ++k) {
    double a = apLocalPower(w, s, J, e, ApKind::OneTailed);
    double b = apLocalPower(w, s, J, e, ApKind::OneTailedDual);
    keepMax(best, at, std::max(a, b), J);
    J = J.dilated(Rat(3));
  }
  return best;
}

Sample t2EquivT1(const std::string& size, const Config& cfg) {
  long pairs = parseLongParam(size, 1, 400);
  std::mt19937_64 rng(cfg.seed);
  const ScanFamily fam{iv(-4, 8), -3, 3, 2, 2};
  const Exponents e{};
  double worst = kInf;
  std::optional<Interval> worstI, worstJ;
  long scanned = 0;
  for (long n = 0; n < pairs; ++n) {
    Measure w = randomMeasure(rng), s = randomMeasure(rng);
    fam.forEach([&](const ScanMember& m) {
      double t2 = apLocalPower(w, s, m.interval, e, ApKind::TwoTailed);
      if (!(t2 > 0)) return;
      ++scanned;
      std::optional<Interval> J;
      double r = ringWitness(w, s, m.interval, 8, J) / t2;
      if (r < worst) {
        worst = r;
        worstI = m.interval;
        worstJ = J;
      }
    });
  }
  Sample out;
  out.set("minWitnessRatio", worst, 1.0 / 64);
  out.set("scanned", static_cast<double>(scanned));
  if (worstI) out.witnesses.push_back({"I", *worstI});
  if (worstJ) out.witnesses.push_back({"J", *worstJ});
  return out;
}

Sample doublingApEquiv(const std::string& size, const Config& cfg) {
  int r = static_cast<int>(parseLongParam(size, 1, 14));
  const Interval win = iv(-4, 4);
  Measure w = powerWeight(0.5, win, r), s = powerWeight(-0.5, win, r);
  const ScanFamily fam{win, std::max<long>(cfg.minLevel, -3), 2, 2, 2};
  auto classical = supAp(w, s, fam, ApKind::Classical);
  auto two = supAp(w, s, fam, ApKind::TwoTailed);
  Sample out;
  out.set("classicalSup", classical.value);
  out.set("t2Sup", two.value);
  // p = 2: the constants themselves are square roots of the power forms.
  out.set("t2OverClassical", std::sqrt(two.value / classical.value), 10.0);
  out.set("t2OverClassicalPower", two.value / classical.value);
  if (two.argmax) out.witnesses.push_back({"t2Argmax", *two.argmax});
  return out;
}

// ---------------------------------------------------------------------------

CpWeightOutput buildCp(int K) {
  CpWeightParams params;
  params.stages.assign(static_cast<std::size_t>(K), CpStage{});
  return cpWeight(params);
}

// Largest Cp ratio over the members of the given families.
double cpSupOver(const Measure& w, const std::vector<const ScanFamily*>& fams,
                 std::optional<Interval>& at) {
  double best = 0;
  for (const auto* fam : fams)
    fam->forEach([&](const ScanMember& m) {
      if (!(w.massD(m.interval) > 0)) return;
      keepMax(best, at, profileSlope(cpProfile(w, m.interval, 2, 2, 3)), m.interval);
    });
  return best;
}

double cpSupAll(const CpWeightOutput& cp, std::optional<Interval>& at) {
  std::vector<const ScanFamily*> fams;
  for (const auto& [name, fam] : cp.out.families) fams.push_back(&fam);
  return cpSupOver(cp.out.measure, fams, at);
}

double cpDoubling(const CpWeightOutput& cp, std::optional<Interval>& at) {
  double best = 0;
  for (const auto& [name, fam] : cp.out.families) {
    auto d = doublingConstant(cp.out.measure, fam, 3);
    keepMax(best, at, d.value, d.witness);
  }
  return best;
}

Sample cpNotAinfty(const std::string& size, const Config&) {
  int K = static_cast<int>(parseLongParam(size, 1, 5));
  auto cp = buildCp(K);
  Sample out;
  std::optional<Interval> dAt, cAt;
  out.set("doubling", cpDoubling(cp, dAt), 9 / std::min(1.0 / 6, 1.0 / 18));
  const auto& st = cp.stages.back();
  out.set("aInftyWitness", st.witnessRatio, std::ldexp(1.0, K - 1));
  out.set("witnessOverFloor", st.witnessRatio / std::ldexp(1.0, K - 1), 1.0);
  out.set("cpSup", cpSupAll(cp, cAt));
  out.set("N", static_cast<double>(cp.N));
  if (dAt) out.witnesses.push_back({"doublingWitness", *dAt});
  if (cAt) out.witnesses.push_back({"cpArgmax", *cAt});
  out.witnesses.push_back({"J", st.a0});
  return out;
}

struct NamedWeight {
  std::string name;
  Measure w;
};

std::vector<NamedWeight> smallDoublingCandidates() {
  std::vector<NamedWeight> out;
  const Interval unit = iv(0, 1), sym = iv(-1, 1);
  out.push_back({"lebesgue", Measure::lebesgue(unit)});
  for (double a : {-0.5, -0.25, 0.25, 0.5, 0.75})
    out.push_back({"power" + formatNumber(a), powerWeight(a, sym, 10)});
  for (long q : {4L, 5L})
    out.push_back({"gks1/" + std::to_string(q), gksCascade({ratFrac(1, q), 6})});
  out.push_back({"gks3/10", gksCascade({ratFrac(3, 10), 6})});
  out.push_back({"bump", Measure({}, {{iv(Rat(0), ratFrac(1, 4)), Rat(1)},
                                      {iv(ratFrac(1, 4), ratFrac(1, 2)), Rat(2)},
                                      {iv(ratFrac(1, 2), Rat(1)), Rat(1)}})});
  out.push_back({"ramp", Measure({}, {{iv(Rat(0), ratFrac(1, 2)), Rat(1)},
                                      {iv(ratFrac(1, 2), Rat(1)), Rat(3, 2)}})});
  return out;
}

Sample cpSmallDoubling(const std::string& size, const Config&) {
  long L = parseLongParam(size, 1, 12);
  Sample out;
  double worst = 0, gain = 0;
  long kept = 0;
  std::optional<Interval> at;
  for (const auto& [name, w] : smallDoublingCandidates()) {
    Interval hull = *w.hull();
    long top = static_cast<long>(std::ceil(std::log2(hull.lengthD())));
    const ScanFamily fam{hull, top - L, top, 2, 2};
    double C = doublingConstant(w, fam, 3).value;
    out.notes.push_back(name + " doubling " + formatNumber(C));
    if (!(C < 9)) continue;
    ++kept;
    const double bound = 36 / (1 - C / 9);
    double own = 0;
    fam.forEach([&](const ScanMember& m) {
      double mass = w.massD(m.interval);
      if (!(mass > 0)) return;
      double g = maximalIndicatorIntegral(w, m.interval, 2) / mass;
      own = std::max(own, g);
      keepMax(worst, at, g / bound, m.interval);
    });
    gain = std::max(gain, own);
    out.notes.push_back(name + " gain " + formatNumber(own));
  }
  out.set("gainOverBound", worst, 1.0);
  out.set("maxGain", gain);
  out.set("weightsKept", static_cast<double>(kept));
  if (at) out.witnesses.push_back({"worst", *at});
  return out;
}

Sample sawyerAinfty(const std::string& size, const Config&) {
  int d = static_cast<int>(parseLongParam(size, 1, 20));
  const Interval unit = iv(0, 1);
  Measure w = powerWeight(-0.5, unit, 14), s = powerWeight(0.5, unit, 14);
  Sample out;
  double best = 0;
  std::optional<Interval> at;
  for (const auto& I : {unit, iv(Rat(0), ratFrac(1, 2)), iv(ratFrac(1, 2), Rat(1)),
                        iv(Rat(0), ratFrac(1, 4)), iv(ratFrac(1, 4), ratFrac(1, 2))})
    keepMax(best, at, sawyerRatio(w, s, I, 2, d), I);
  out.set("sawyerPower", best);
  if (at) out.witnesses.push_back({"powerArgmax", *at});
  out.set("sawyerAtom",
          sawyerRatio(Measure::lebesgue(unit), Measure::atom(ratFrac(1, 3), Rat(1)), unit, 2, d));
  return out;
}

double stoppingRatio(const Measure& s, const Interval& I, int depth) {
  auto f = stoppingCubes(s, I, 8, depth);
  return f.total.get_d() / s.massD(I);
}

double bestPivotal(const Measure& w, const Measure& s, const Interval& i0, int base, int depth,
                   int greedyCells, bool withEnergy, std::optional<Interval>& cellAt) {
  const Exponents e{};
  double best = 0;
  auto score = [&](const Partition& p) { return pivotalSum(w, s, p, e, withEnergy); };
  forEachPartition(i0, base, depth, [&](const Partition& p) {
    double v = score(p);
    if (v > best) {
      best = v;
      cellAt = p.parent;
    }
  });
  if (greedyCells > 0) {
    auto g = greedyRefine(i0, score, greedyCells, base);
    double v = score(g);
    if (v > best) {
      best = v;
      cellAt = g.parent;
    }
  }
  return best;
}

Sample ainftyPivotal(const std::string& size, const Config& cfg) {
  int d = static_cast<int>(parseLongParam(size, 1, 24));
  const Interval unit = iv(0, 1);
  Sample out;
  std::vector<NamedWeight> sigmas{{"lebesgue", Measure::lebesgue(unit)},
                                  {"power0.5", powerWeight(0.5, unit, 12)},
                                  {"power-0.5", powerWeight(-0.5, unit, 12)}};
  double stop = 0;
  for (const auto& [name, s] : sigmas)
    for (const auto& I : {unit, iv(Rat(0), ratFrac(1, 4)), iv(ratFrac(1, 2), Rat(1))}) {
      double r = stoppingRatio(s, I, d);
      if (r > stop) {
        stop = r;
        out.notes.push_back("stopping max from " + name + " on " + toString(I));
      }
    }
  out.set("stoppingSum", stop, 2.0);

  double worst = 0;
  std::optional<Interval> at;
  std::vector<std::pair<Measure, Measure>> pairs{
      {Measure::lebesgue(unit), Measure::lebesgue(unit)},
      {powerWeight(-0.5, unit, 10), powerWeight(0.5, unit, 10)},
      {powerWeight(0.5, unit, 10), powerWeight(-0.5, unit, 10)}};
  for (const auto& [w, s] : pairs)
    for (const auto& i0 : {unit, iv(Rat(0), ratFrac(1, 2)), iv(ratFrac(1, 4), ratFrac(1, 2))}) {
      double maximal = dyadicMaximalIntegral(s, w, i0, 2, d).value / s.massD(i0);
      std::optional<Interval> p0;
      double piv = bestPivotal(w, s, i0, 2, std::min(cfg.partitionDepth, 3), cfg.greedyCells,
                               false, p0);
      keepMax(worst, at, piv / maximal, i0);
    }
  out.set("pivotalOverMaximal", worst, 8.0);
  if (at) out.witnesses.push_back({"pivotalWorst", *at});
  out.set("atomStoppingSum", stoppingRatio(Measure::atom(ratFrac(1, 3), Rat(1)), unit, d));
  return out;
}

double harmonicTail(long N) {
  double h = 0;
  for (long n = N; n >= 2; --n) h += 1.0 / static_cast<double>(n);
  return h;
}

Sample pivotalNotT1(const std::string& size, const Config& cfg) {
  long N = parseLongParam(size, 2, 2000);
  auto c = pivotalExamplePair(static_cast<int>(N));
  const Measure& w = c.measure;
  const Measure& s = *c.sigma;
  std::vector<Interval> roots;
  for (const Rat& a : {ratFrac(1, 2), Rat(1)})
    for (const Rat& b : {Rat(2), Rat(Rat(N / 4) + ratFrac(1, 2)), Rat(Rat(N / 2) + ratFrac(1, 2)),
                         Rat(Rat(N) + ratFrac(1, 2))})
      roots.push_back(iv(Rat(-a), b));
  double best = 0;
  std::optional<Interval> at;
  for (const auto& i0 : roots) {
    std::optional<Interval> p0;
    keepMax(best, at, bestPivotal(w, s, i0, 2, 2, cfg.greedyCells, false, p0), i0);
  }
  Sample out;
  out.set("pivotalSup", best);
  if (at) out.witnesses.push_back({"pivotalArgmax", *at});
  out.set("t1", apLocalPower(w, s, c.witness("I"), Exponents{}, ApKind::OneTailed),
          harmonicTail(N));
  out.witnesses.push_back({"I", c.witness("I")});
  return out;
}

struct Pair {
  Measure w, s;
  std::vector<Interval> roots;
};

Sample energyLePivotal(const std::string& size, const Config& cfg) {
  int depth = static_cast<int>(parseLongParam(size, 1, 6));
  std::vector<Pair> pairs;
  {
    auto c = pivotalExamplePair(10);
    pairs.push_back({c.measure, *c.sigma, {iv(Rat(-1), ratFrac(21, 2)), iv(-1, 3)}});
  }
  pairs.push_back({Measure::lebesgue(iv(0, 1)), Measure::lebesgue(iv(0, 1)), {iv(0, 1)}});
  std::mt19937_64 rng(cfg.seed);
  for (int k = 0; k < 6; ++k) {
    Measure w = randomMeasure(rng), s = randomMeasure(rng);
    pairs.push_back({w, s, {iv(0, 4), iv(0, 2), iv(1, 3)}});
  }
  const Exponents e{};
  double worst = 0;
  long checked = 0, violations = 0;
  std::optional<Interval> at;
  for (const auto& [w, s, roots] : pairs)
    for (const auto& i0 : roots) {
      if (!(s.massD(i0) > 0)) continue;
      forEachPartition(i0, 2, depth, [&](const Partition& p) {
        double piv = pivotalSum(w, s, p, e, false);
        if (!(piv > 0)) return;
        double r = pivotalSum(w, s, p, e, true) / piv;
        ++checked;
        if (r > 0.5) ++violations;
        keepMax(worst, at, r, p.parent);
      });
    }
  Sample out;
  out.set("energyOverPivotal", worst, 0.5);
  out.set("partitions", static_cast<double>(checked));
  out.set("violations", static_cast<double>(violations), 0.0);
  if (at) out.witnesses.push_back({"worstRoot", *at});
  return out;
}

Sample smallDoublingPivotal(const std::string& size, const Config& cfg) {
  int d = static_cast<int>(parseLongParam(size, 1, 10));
  const Interval unit = iv(0, 1);
  auto gks = [&](long p, long q) { return gksCascade({ratFrac(p, q), d}); };
  std::vector<std::pair<std::string, std::pair<Measure, Measure>>> pairs{
      {"lebesgue", {Measure::lebesgue(unit), Measure::lebesgue(unit)}},
      {"gks1/4", {gks(1, 4), gks(1, 4)}},
      {"gks3/10|1/5", {gks(3, 10), gks(1, 5)}},
      {"gks1/5|lebesgue", {gks(1, 5), Measure::lebesgue(unit)}}};
  const ScanFamily fam{unit, -std::min(d, 7), 0, 3, 3};
  const ScanFamily inner{iv(ratFrac(1, 3), ratFrac(2, 3)), -std::min(d, 7), -1, 3, 3};
  const std::vector<Interval> roots{unit, iv(Rat(0), ratFrac(1, 3)),
                                    iv(ratFrac(1, 3), ratFrac(2, 3))};
  Sample out;
  double worst = 0;
  long kept = 0;
  std::optional<Interval> at;
  for (const auto& [name, pr] : pairs) {
    const auto& [w, s] = pr;
    double Ks = doublingConstant(s, inner, 2).value;
    double dw = reverseDoublingConstant(w, inner, 2).value - 1;
    out.notes.push_back(name + " K_sigma " + formatNumber(Ks) + " delta_omega " + formatNumber(dw));
    if (!(Ks < 4 * (1 + dw))) continue;
    ++kept;
    double A2 = supAp(w, s, fam, ApKind::Classical).value;
    for (const auto& i0 : roots) {
      std::optional<Interval> p0;
      double piv = std::max(bestPivotal(w, s, i0, 3, 2, cfg.greedyCells, false, p0),
                            bestPivotal(w, s, i0, 2, 3, 0, false, p0));
      keepMax(worst, at, piv / (10 * A2), i0);
    }
  }
  out.set("pivotalOverTenAp", worst, 1.0);
  out.set("pairsKept", static_cast<double>(kept));
  if (at) out.witnesses.push_back({"worstRoot", *at});
  return out;
}

Sample gksAfrac(const std::string& size, const Config&) {
  int d = static_cast<int>(parseLongParam(size, 1, 13));
  Measure mu = gksCascade({ratFrac(1, 4), d});
  const double alpha = 0.6;
  double best = 0;
  std::optional<Interval> at;
  for (const auto& I : {iv(0, 1), iv(Rat(0), ratFrac(1, 3)), iv(ratFrac(1, 3), ratFrac(2, 3)),
                        iv(Rat(0), ratFrac(1, 9))})
    keepMax(best, at, rieszPotentialSup(mu, I, alpha, midpointSamples(I, 60)).normalized, I);
  // Dilates of members stay inside the support.
  const ScanFamily fam{iv(ratFrac(1, 3), ratFrac(2, 3)), -6, -1, 3, 3};
  Sample out;
  out.set("rieszNormalized", best);
  out.set("alphaThreshold", 1 - std::log(2 / (1 - 0.25)) / std::log(3.0), alpha);
  out.set("doubling", doublingConstant(mu, fam, 2).value);
  out.set("reverseDoubling", reverseDoublingConstant(mu, fam, 2).value);
  if (at) out.witnesses.push_back({"rieszArgmax", *at});
  return out;
}

Sample doublingEnergyFloor(const std::string& size, const Config&) {
  int d = static_cast<int>(parseLongParam(size, 1, 12));
  Measure mu = gksCascade({ratFrac(1, 4), d});
  const ScanFamily fam{iv(0, 1), -5, 0, 3, 3};
  double least = kInf;
  std::optional<Interval> at;
  fam.forEach([&](const ScanMember& m) {
    if (mu.mass(m.interval) == 0) return;
    double e = energyE2(m.interval, mu).get_d();
    if (e < least) {
      least = e;
      at = m.interval;
    }
  });
  Sample out;
  out.set("minEnergy", least, 0.01);
  out.set("minEnergyTrend", least);
  out.set("atomEnergy", energyE2(iv(0, 1), Measure::atom(ratFrac(1, 3), Rat(1))).get_d(), 0.0);
  if (at) out.witnesses.push_back({"minEnergyAt", *at});
  return out;
}

double powerScan(double a, int resolution) {
  const Interval win = iv(-1, 1);
  Measure w = powerWeight(a, win, resolution);
  const ScanFamily fam{win, -6, 0, 2, 2};
  return supOverFamily([&](const Interval& I) { return oneWeightAp(w, I, 2); }, fam).value;
}

Sample powerweightAp(const std::string& size, const Config&) {
  double a = parseDoubleParam(size);
  auto bound = powerWeightApBound(a, 2);
  Sample out;
  out.set("analyticFinite", bound.finite ? 1 : 0, bound.finite ? std::optional(bound.value)
                                                               : std::nullopt);
  if (!(a > -1)) {
    out.notes.push_back("not locally integrable");
    return out;
  }
  double coarse = powerScan(a, 8), fine = powerScan(a, 12);
  out.set("scanSup", fine);
  if (bound.finite) {
    out.set("scanOverBound", fine / bound.value, 4.0, Expect::AtMost);
    out.set("boundOverScan", bound.value / fine, 4.0, Expect::AtMost);
    out.set("refinementGrowth", fine / coarse, 1.05, Expect::AtMost);
  } else {
    out.set("refinementGrowth", fine / coarse, 1.2, Expect::AtLeast);
  }
  return out;
}

Sample dualPivotalProbe(const std::string& size, const Config& cfg) {
  long N = parseLongParam(size, 2, 2000);
  auto c = pivotalExamplePair(static_cast<int>(N));
  const Measure& w = c.measure;
  const Measure& s = *c.sigma;
  std::optional<Interval> p0;
  const Interval i0 = iv(Rat(-1), Rat(Rat(N) + ratFrac(1, 2)));
  Sample out;
  out.set("pivotal", bestPivotal(w, s, i0, 2, 2, cfg.greedyCells, false, p0));
  out.set("pivotalDual", bestPivotal(s, w, i0, 2, 2, cfg.greedyCells, false, p0));
  out.set("t1", apLocalPower(w, s, c.witness("I"), Exponents{}, ApKind::OneTailed));
  return out;
}

// ---------------------------------------------------------------------------

StatSpec bounded(std::string name, double slack = 0) {
  return {std::move(name), Expect::Bounded, 0, false, slack};
}
StatSpec stable(std::string name, double slack = 0) {
  return {std::move(name), Expect::Stable, 0, false, slack};
}
StatSpec ratio(std::string name, double floor) {
  return {std::move(name), Expect::Divergent, floor, false, 0};
}
StatSpec increment(std::string name, double floor) {
  return {std::move(name), Expect::Divergent, floor, true, 0};
}
StatSpec atMost(std::string name) { return {std::move(name), Expect::AtMost, 0, false, 0}; }
StatSpec atLeast(std::string name) { return {std::move(name), Expect::AtLeast, 0, false, 0}; }
StatSpec report(std::string name) { return {std::move(name), Expect::Report, 0, false, 0}; }
StatSpec open(std::string name) { return {std::move(name), Expect::Inconclusive, 0, false, 0}; }

const std::vector<ClaimDef>& defs() {
  static const std::vector<ClaimDef> all = [] {
    std::vector<ClaimDef> v;
    auto add = [&](ClaimInfo info, Sizer sz, Evaluator ev) {
      v.push_back({std::move(info), std::move(sz), std::move(ev)});
    };
    add({"ap-not-t1", "classical Ap stays bounded while both one-tailed constants grow", "K",
         "3", false,
         {bounded("classicalSup"), increment("t1", 0.45), increment("t1Dual", 0.45)}},
        plusSizer(1, 1, 6), apNotT1);
    add({"t1-not-t2", "one-tailed Ap stays bounded while the two-tailed constant grows", "N", "6",
         false, {bounded("t1Sup"), ratio("t2", 1.8)}},
        timesSizer(2, 1, 20), t1NotT2);
    add({"t2-equiv-t1", "two-tailed Ap is dominated by one-tailed values on dilates", "pairs",
         "25", false, {atLeast("minWitnessRatio"), report("scanned")}},
        timesSizer(2, 1, 400), t2EquivT1);
    add({"doubling-ap-equiv", "for doubling power weights two-tailed and classical Ap agree",
         "resolution", "6", false,
         {bounded("classicalSup"), bounded("t2Sup"), atMost("t2OverClassical"),
          report("t2OverClassicalPower")}},
        timesSizer(2, 1, 14), doublingApEquiv);
    add({"cp-not-ainfty", "a doubling Cp weight outside A-infinity", "K", "2", false,
         {atMost("doubling"), ratio("aInftyWitness", 1.5), atLeast("witnessOverFloor"),
          bounded("cpSup", 1.25), report("N")}},
        plusSizer(1, 1, 5), cpNotAinfty);
    add({"cp-smalldoubling-ainfty",
         "small doubling constant makes the maximal indicator integral comparable to w(I)",
         "levels", "4", false,
         {atMost("gainOverBound"), report("maxGain"), report("weightsKept")}},
        timesSizer(2, 1, 12), cpSmallDoubling);
    add({"sawyer-ainfty", "dyadic Sawyer testing holds for A-infinity sigma and fails for an atom",
         "depth", "6", false, {bounded("sawyerPower"), ratio("sawyerAtom", 1.5)}},
        timesSizer(2, 1, 20), sawyerAinfty);
    add({"ainfty-pivotal", "stopping sums of A-infinity weights control the pivotal sums",
         "depth", "8", false,
         {atMost("stoppingSum"), atMost("pivotalOverMaximal"), ratio("atomStoppingSum", 1.5)}},
        timesSizer(2, 1, 24), ainftyPivotal);
    add({"pivotal-not-t1", "pivotal condition holds while one-tailed Ap diverges", "N", "50",
         false, {bounded("pivotalSup"), ratio("t1", 1.3)}},
        timesSizer(4, 2, 2000), pivotalNotT1);
    add({"energy-le-pivotal", "energy sums are at most half the pivotal sums", "depth", "2",
         false, {atMost("energyOverPivotal"), report("partitions"), atMost("violations")}},
        timesSizer(2, 1, 6), energyLePivotal);
    add({"smalldoubling-pivotal", "small doubling pairs satisfy the pivotal condition", "depth",
         "4", false, {atMost("pivotalOverTenAp"), report("pairsKept")}},
        timesSizer(2, 1, 10), smallDoublingPivotal);
    add({"gks-afrac-doubling", "fractional potential of the cascade is uniformly controlled",
         "depth", "8", false,
         {bounded("rieszNormalized", 1.10), atMost("alphaThreshold"), stable("doubling"),
          stable("reverseDoubling")}},
        plusSizer(4, 1, 13), gksAfrac);
    add({"doubling-energy-floor", "doubling measures have energy bounded below", "depth", "5",
         false, {atLeast("minEnergy"), stable("minEnergyTrend", 1.10), atMost("atomEnergy")}},
        timesSizer(2, 1, 12), doublingEnergyFloor);
    add({"powerweight-ap", "power weight |x|^a is in A2 exactly for -1 < a < 1", "alphaExp", "0.5",
         false,
         {report("analyticFinite"), report("scanSup"), atMost("scanOverBound"),
          atMost("boundOverScan"), atMost("refinementGrowth")}},
        [](const std::string& s) { return std::vector<std::string>{s}; }, powerweightAp);
    add({"dual-pivotal-probe", "pivotal both ways versus one-tailed Ap (open)", "N", "20", true,
         {open("pivotal"), open("pivotalDual"), open("t1")}},
        timesSizer(2, 2, 2000), dualPivotalProbe);
    return v;
  }();
  return all;
}

const ClaimDef& def(const std::string& id) {
  for (const auto& d : defs())
    if (d.info.id == id) return d;
  throw Error(ErrorCode::UnknownClaim, id);
}

struct Block {
  std::string param;
  Sample sample;
};

bool pointwiseOk(Expect e, const Value& v) {
  if (!v.bound) return true;
  if (e == Expect::AtMost || e == Expect::Bounded) return v.value <= *v.bound;
  if (e == Expect::AtLeast) return v.value >= *v.bound;
  return true;
}

bool trendOk(const StatSpec& spec, double slack, double v1, double v2) {
  switch (spec.expect) {
    case Expect::Bounded: return v2 <= v1 * slack || (v1 == 0 && v2 == 0);
    case Expect::Stable: return std::abs(v2 - v1) <= (slack - 1) * std::abs(v1);
    case Expect::Divergent:
      return spec.increment ? v2 - v1 >= spec.floor : (v1 > 0 && v2 / v1 >= spec.floor);
    default: return true;
  }
}

// Fills verdicts; sweep mode compares consecutive blocks, otherwise every
// row of a trend statistic carries the verdict of the whole run.
ClaimReport assemble(const ClaimDef& d, std::vector<Block> blocks, const Config& cfg, bool sweep) {
  ClaimReport rep;
  rep.id = d.info.id;
  for (const auto& b : blocks) {
    for (auto w : b.sample.witnesses) {
      w.name = b.param + ":" + w.name;
      rep.witnesses.push_back(std::move(w));
    }
    for (const auto& n : b.sample.notes) rep.notes.push_back(b.param + ": " + n);
  }
  for (const auto& spec : d.info.stats) {
    const double slack = spec.slack > 0 ? spec.slack : cfg.slack;
    std::vector<std::pair<const Block*, const Value*>> seq;
    for (const auto& b : blocks)
      if (auto it = b.sample.stats.find(spec.name); it != b.sample.stats.end())
        seq.push_back({&b, &it->second});
    bool wholeTrend = true;
    for (std::size_t j = 1; j < seq.size(); ++j)
      wholeTrend = wholeTrend && trendOk(spec, slack, seq[j - 1].second->value, seq[j].second->value);
    for (std::size_t j = 0; j < seq.size(); ++j) {
      const auto& [b, v] = seq[j];
      const Expect e = v->expect.value_or(spec.expect);
      std::string verdict;
      bool ok = pointwiseOk(e, *v);
      if (e == Expect::Bounded || e == Expect::Stable || e == Expect::Divergent) {
        if (seq.size() < 2) {
          verdict = ok ? "SINGLE" : "FAIL";
          if (e == Expect::Divergent) ok = true, verdict = "SINGLE";
        } else if (sweep) {
          if (j == 0) verdict = ok ? "BASE" : "FAIL";
          else ok = ok && trendOk(spec, slack, seq[j - 1].second->value, v->value);
        } else {
          ok = ok && wholeTrend;
        }
      }
      if (verdict.empty()) verdict = ok ? std::string(toString(e)) : "FAIL";
      if (!ok) rep.pass = false;
      rep.rows.push_back({d.info.id, b->param, spec.name, v->value, v->bound, verdict});
    }
  }
  // Keep rows grouped by parameter value, statistics in registry order.
  std::stable_sort(rep.rows.begin(), rep.rows.end(), [&](const ReportRow& a, const ReportRow& b) {
    auto pos = [&](const std::string& p) {
      for (std::size_t k = 0; k < blocks.size(); ++k)
        if (blocks[k].param == p) return k;
      return blocks.size();
    };
    return pos(a.param) < pos(b.param);
  });
  return rep;
}

void applyCap(const Config& cfg) {
  if (cfg.maxCandidates > 0) setCandidateCap(cfg.maxCandidates);
}

Sample evaluate(const ClaimDef& d, const std::string& size, const Config& cfg) {
  try {
    return d.eval(size, cfg);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FamilyTooLarge) throw Error(ErrorCode::CapExceeded, e.what());
    throw;
  }
}

}  // namespace

const std::vector<ClaimInfo>& claimRegistry() {
  static const std::vector<ClaimInfo> infos = [] {
    std::vector<ClaimInfo> v;
    for (const auto& d : defs()) v.push_back(d.info);
    return v;
  }();
  return infos;
}

const ClaimInfo& claimInfo(const std::string& id) { return def(id).info; }

std::vector<std::string> claimSizes(const std::string& id, const std::string& scale) {
  return def(id).sizes(scale);
}

ClaimReport runClaim(const std::string& id, const std::optional<std::string>& scale,
                     const Config& cfg) {
  const auto& d = def(id);
  applyCap(cfg);
  std::vector<Block> blocks;
  for (const auto& size : d.sizes(scale.value_or(d.info.defaultScale)))
    blocks.push_back({size, evaluate(d, size, cfg)});
  return assemble(d, std::move(blocks), cfg, false);
}

ClaimReport sweepClaim(const std::string& id, const std::vector<std::string>& values,
                       const Config& cfg) {
  const auto& d = def(id);
  applyCap(cfg);
  std::vector<Block> blocks;
  for (const auto& v : values) blocks.push_back({v, evaluate(d, v, cfg)});
  return assemble(d, std::move(blocks), cfg, true);
}

}  // namespace wtc
