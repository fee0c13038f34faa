#include "wtc/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "wtc/error.hpp"
#include "wtc/functionals.hpp"

namespace wtc {

const Interval& ConstructionOutput::witness(const std::string& name) const {
  for (const auto& w : witnesses)
    if (w.name == name) return w.interval;
  throw Error(ErrorCode::ParamDomain, "no witness named " + name);
}

double ConstructionOutput::stat(const std::string& name) const {
  for (const auto& [k, v] : stats)
    if (k == name) return v;
  throw Error(ErrorCode::ParamDomain, "no statistic named " + name);
}

Measure lebesgueOn(const Interval& iv) { return Measure::lebesgue(iv); }

Measure powerWeight(double alphaExp, const Interval& window, int resolution) {
  if (!(alphaExp > -1)) throw Error(ErrorCode::NonIntegrable, "power weight needs exponent > -1");
  if (resolution < 0 || resolution > 40) throw Error(ErrorCode::ParamDomain, "resolution out of range");
  if (alphaExp == 0) return Measure::lebesgue(window);
  const Rat h = ratPow(Rat(2), -resolution);
  const BigInt cells = ratCeil(window.length() / h);
  if (cells > BigInt(static_cast<unsigned long>(candidateCap())))
    throw Error(ErrorCode::FamilyTooLarge, "power weight has too many cells");
  auto F = [&](double x) {
    double s = x < 0 ? -1.0 : 1.0;
    return s * std::pow(std::abs(x), alphaExp + 1) / (alphaExp + 1);
  };
  std::vector<StepPiece> pieces;
  Rat lo = window.lo();
  for (long k = 0, n = cells.get_si(); k < n; ++k) {
    Rat hi = k + 1 == n ? window.hi() : Rat(lo + h);
    double a = lo.get_d(), b = hi.get_d();
    pieces.push_back({Interval(lo, hi), fromDouble((F(b) - F(a)) / (b - a))});
    lo = hi;
  }
  return Measure({}, std::move(pieces));
}

std::vector<Rat> cascadeMasses(const Rat& delta, int depth) {
  if (!(delta > 0 && delta < 1) || depth < 0)
    throw Error(ErrorCode::ParamDomain, "cascade needs 0 < delta < 1 and depth >= 0");
  const Rat side = (1 - delta) / 2;
  std::vector<Rat> masses{Rat(1)};
  for (int d = 0; d < depth; ++d) {
    std::vector<Rat> next;
    next.reserve(masses.size() * 3);
    for (const auto& m : masses) {
      next.push_back(side * m);
      next.push_back(delta * m);
      next.push_back(side * m);
    }
    masses = std::move(next);
  }
  return masses;
}

namespace {

void placeCascade(std::vector<StepPiece>& pieces, const Interval& where, const Rat& total,
                  const Rat& delta, int depth) {
  const auto masses = cascadeMasses(delta, depth);
  const Rat width = where.length() / static_cast<long>(masses.size());
  Rat lo = where.lo();
  for (std::size_t j = 0; j < masses.size(); ++j) {
    Rat hi = j + 1 == masses.size() ? where.hi() : Rat(lo + width);
    pieces.push_back({Interval(lo, hi), total * masses[j] / width});
    lo = hi;
  }
}

}  // namespace

Measure gksCascade(const CascadeParams& params) {
  if (!(params.delta > 0 && params.delta < Rat(1, 3)))
    throw Error(ErrorCode::ParamDomain, "cascade delta must lie in (0,1/3)");
  std::vector<StepPiece> pieces;
  placeCascade(pieces, Interval(0, 1), Rat(1), params.delta, params.depth);
  return Measure({}, std::move(pieces));
}

Measure remark2Weight(const Rat& W) {
  if (!(W > 1)) throw Error(ErrorCode::ParamDomain, "W must exceed 1");
  return Measure({}, {{Interval(-W, -1), Rat(1)}, {Interval(1, W), Rat(1)}});
}

namespace {

Rat sideMass(const CpWeightParams& p, long n) {
  return (1 - p.delta1) / (2 * ratPow(p.delta1, n));
}

Interval stageThird(long n) {
  Rat big = ratPow(Rat(3), n) / 2;
  return {-big, Rat(ratPow(Rat(3), n - 1) / 2) * -1};
}

Interval stageCell(long n, long m) {
  Rat c = -ratPow(Rat(3), n - 1);
  Rat half = ratPow(Rat(3), m) / 2;
  return {c - half, c + half};
}

void addUniform(std::vector<StepPiece>& pieces, const Interval& iv, const Rat& mass) {
  pieces.push_back({iv, mass / iv.length()});
}

void addStage(std::vector<StepPiece>& pieces, const CpWeightParams& p, long n, int i) {
  const Rat& d2 = p.delta2;
  const Rat side = (1 - d2) / 2;
  const Rat W = sideMass(p, n);
  for (long m = n - 1; m >= 2; --m) {
    Interval outer = stageCell(n, m), inner = stageCell(n, m - 1);
    Rat ringMass = (1 - d2) * ratPow(d2, n - 1 - m) * W;
    addUniform(pieces, Interval(outer.lo(), inner.lo()), ringMass / 2);
    addUniform(pieces, Interval(inner.hi(), outer.hi()), ringMass / 2);
  }
  const Interval a1 = stageCell(n, 1), a0 = stageCell(n, 0);
  const Rat m1 = ratPow(d2, n - 2) * W;
  placeCascade(pieces, a0, d2 * m1, d2, i);

  Rat lo = a1.lo(), hi = a0.lo(), m = side * m1;
  for (int level = 0; level < i; ++level) {
    Rat third = (hi - lo) / 3;
    addUniform(pieces, Interval(lo, lo + third), side * m);
    addUniform(pieces, Interval(lo + third, lo + 2 * third), d2 * m);
    lo += 2 * third;
    m *= side;
  }
  addUniform(pieces, Interval(lo, hi), m);

  lo = a0.hi();
  hi = a1.hi();
  m = side * m1;
  for (int level = 0; level < i; ++level) {
    Rat third = (hi - lo) / 3;
    addUniform(pieces, Interval(hi - third, hi), side * m);
    addUniform(pieces, Interval(hi - 2 * third, hi - third), d2 * m);
    hi -= 2 * third;
    m *= side;
  }
  addUniform(pieces, Interval(lo, hi), m);
}

void checkCpParams(const CpWeightParams& p) {
  if (!(p.p > 1)) throw Error(ErrorCode::ParamDomain, "p must exceed 1");
  double d1 = p.delta1.get_d();
  if (!(d1 > std::pow(3.0, -p.p) && p.delta1 < Rat(1, 3)))
    throw Error(ErrorCode::ParamDomain, "delta1 must lie in (3^-p, 1/3)");
  if (!(p.delta2 > 0 && p.delta2 < Rat(1, 3)))
    throw Error(ErrorCode::ParamDomain, "delta2 must lie in (0, 1/3)");
  if (p.stages.empty()) throw Error(ErrorCode::ParamDomain, "at least one stage is required");
}

}  // namespace

Measure cpWeightMeasure(const CpWeightParams& params, const std::vector<CpStage>& stages, long N) {
  std::vector<StepPiece> pieces;
  pieces.push_back({Interval(Rat(-1, 2), Rat(1, 2)), Rat(1)});
  for (long n = 1; n <= N; ++n) {
    const Rat W = sideMass(params, n);
    const Rat len = ratPow(Rat(3), n - 1);
    addUniform(pieces, Interval(len / 2, ratPow(Rat(3), n) / 2), W);
    auto st = std::find_if(stages.begin(), stages.end(), [&](const CpStage& s) { return s.n == n; });
    if (st != stages.end()) addStage(pieces, params, n, st->i);
    else addUniform(pieces, stageThird(n), W);
  }
  return Measure({}, std::move(pieces));
}

std::vector<Interval> triadicCells(const Interval& a1, int depth) {
  std::vector<Interval> out{a1};
  for (int j = 0; j <= depth; ++j) {
    long count = 1;
    for (int t = 0; t <= j; ++t) count *= 3;
    Rat width = a1.length() / count;
    for (long c = 0; c < count; ++c) out.emplace_back(a1.lo() + width * c, a1.lo() + width * (c + 1));
  }
  return out;
}

namespace {

struct GainResult {
  double value;
  Interval witness;
};

GainResult minGain(const Measure& w, const Interval& a1, int depth, double p) {
  GainResult best{std::numeric_limits<double>::infinity(), a1};
  for (const auto& iv : triadicCells(a1, depth)) {
    double mass = w.massD(iv);
    if (!(mass > 0)) continue;
    double g = maximalIndicatorIntegral(w, iv, p) / mass;
    if (g < best.value) best = {g, iv};
  }
  return best;
}

/// Size and mass fraction of the densest-first prefix reaching half the mass.
ProfilePoint cascadeHalfSet(const Rat& delta, int depth) {
  auto masses = cascadeMasses(delta, depth);
  std::vector<double> m;
  m.reserve(masses.size());
  for (const auto& r : masses) m.push_back(r.get_d());
  std::sort(m.begin(), m.end(), std::greater<>());
  double acc = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    acc += m[k];
    if (acc >= 0.5) return {static_cast<double>(k + 1) / static_cast<double>(m.size()), acc};
  }
  return {1, acc};
}

bool cascadeDepthWorks(const Rat& delta, int depth, int k) {
  auto pt = cascadeHalfSet(delta, depth);
  return pt.size <= std::ldexp(1.0, -k) && pt.ratio >= 0.3 && pt.ratio <= 0.7;
}

int autoDepth(const Rat& delta, int k, int maxI) {
  int lo = 0, hi = 1;
  while (!cascadeDepthWorks(delta, hi, k)) {
    lo = hi;
    hi *= 2;
    if (hi > maxI) {
      hi = maxI;
      if (!cascadeDepthWorks(delta, hi, k))
        throw Error(ErrorCode::StageOverflow,
                    "no cascade depth up to " + std::to_string(maxI) + " fits stage " +
                        std::to_string(k));
      break;
    }
  }
  for (int d = lo + 1; d < hi; ++d)
    if (cascadeDepthWorks(delta, d, k)) return d;
  return hi;
}

}  // namespace

CpWeightOutput cpWeight(const CpWeightParams& params) {
  checkCpParams(params);
  const int K = static_cast<int>(params.stages.size());
  std::vector<CpStage> fixed;
  std::vector<bool> autoN;
  auto target = [&](int k) { return params.gainFactor * std::ldexp(1.0, k); };

  for (int k = 1; k <= K; ++k) {
    CpStage st = params.stages[static_cast<std::size_t>(k - 1)];
    if (st.i == 0) st.i = autoDepth(params.delta2, k, params.maxI);
    long floorN = std::max<long>(2, fixed.empty() ? 2 : fixed.back().n + 1);
    autoN.push_back(st.n == 0);
    if (st.n != 0) {
      if (st.n < floorN) throw Error(ErrorCode::ParamDomain, "stage exponents must increase from 2");
    } else {
      for (long n = floorN;; ++n) {
        if (n > params.maxN)
          throw Error(ErrorCode::StageOverflow, "stage " + std::to_string(k) + " needs n > " +
                                                    std::to_string(params.maxN));
        auto trial = fixed;
        trial.push_back({n, st.i});
        Measure w = cpWeightMeasure(params, trial, n + 1);
        if (minGain(w, stageCell(n, 1), st.i, params.p).value >= target(k)) {
          st.n = n;
          break;
        }
      }
    }
    fixed.push_back(st);
  }

  long N = params.N;
  for (;;) {
    long need = fixed.back().n + 1;
    if (N == 0 || params.N == 0) N = need;
    if (N < need) throw Error(ErrorCode::ParamDomain, "support exponent N below max n_k + 1");
    Measure w = cpWeightMeasure(params, fixed, N);
    bool bumped = false;
    for (int k = 1; k <= K && !bumped; ++k) {
      auto& st = fixed[static_cast<std::size_t>(k - 1)];
      if (!autoN[static_cast<std::size_t>(k - 1)]) continue;
      if (minGain(w, stageCell(st.n, 1), st.i, params.p).value >= target(k)) continue;
      ++st.n;
      for (std::size_t j = static_cast<std::size_t>(k); j < fixed.size(); ++j)
        fixed[j].n = std::max(fixed[j].n, fixed[j - 1].n + 1);
      if (fixed.back().n > params.maxN)
        throw Error(ErrorCode::StageOverflow, "re-verification pushed n past " +
                                                  std::to_string(params.maxN));
      bumped = true;
    }
    if (bumped) continue;

    CpWeightOutput result{ConstructionOutput{w, std::nullopt, {}, {}, {}}, {}, N};
    auto& out = result.out;
    Rat big = ratPow(Rat(3), N) / 2;
    out.witnesses.push_back({"support", Interval(-big, big)});
    out.stats.push_back({"N", static_cast<double>(N)});
    out.families.push_back(
        {"global", ScanFamily{Interval(-big, big), std::max<long>(0, N - 7), N, 3, 2}});
    out.families.push_back({"origin", ScanFamily{Interval(Rat(-9, 2), Rat(9, 2)), -3, 2, 3, 6}});
    for (int k = 1; k <= K; ++k) {
      const auto& st = fixed[static_cast<std::size_t>(k - 1)];
      Interval a0 = stageCell(st.n, 0), a1 = stageCell(st.n, 1);
      auto curve = aInfinityProfile(w, a0, st.i, 3);
      auto half = firstReaching(curve, 0.5).value_or(ProfilePoint{1, 1});
      auto gain = minGain(w, a1, st.i, params.p);
      CpStageReport rep{k,          st.n,        st.i,        stageThird(st.n),
                        a0,         a1,          half.size,   half.ratio,
                        half.ratio / half.size,  gain.value,  gain.witness};
      std::string pre = "k" + std::to_string(k) + ".";
      out.witnesses.push_back({pre + "third", rep.third});
      out.witnesses.push_back({pre + "J", a0});
      out.witnesses.push_back({pre + "a1", a1});
      out.witnesses.push_back({pre + "gain", gain.witness});
      out.stats.push_back({pre + "n", static_cast<double>(st.n)});
      out.stats.push_back({pre + "i", st.i});
      out.stats.push_back({pre + "eSize", rep.eSize});
      out.stats.push_back({pre + "eMass", rep.eMassRatio});
      out.stats.push_back({pre + "witnessRatio", rep.witnessRatio});
      out.stats.push_back({pre + "minGain", rep.minGain});
      out.families.push_back(
          {pre + "stage", ScanFamily{a1.dilated(3), -(st.i + 1), 2, 3, 6}});
      result.stages.push_back(rep);
    }
    return result;
  }
}

ConstructionOutput thm5Part1Pair(int K) {
  if (K < 1 || K > 6) throw Error(ErrorCode::ParamDomain, "stage count must lie in 1..6");
  std::vector<StepPiece> omega, sigma;
  auto addV = [](std::vector<StepPiece>& out, const Rat& k, int n) {
    for (int i = 0; i <= n; ++i) {
      Rat a = ratPow(Rat(2), i), b = ratPow(Rat(2), i + 1);
      out.push_back({Interval(k + a, k + b), a});
    }
  };
  ConstructionOutput out{Measure(), std::nullopt, {}, {}, {}};
  for (int k = 1; k <= K; ++k) {
    Rat c = ratPow(Rat(100), k);
    omega.push_back({Interval(c, c + 1), Rat(1)});
    addV(omega, -c, k);
    sigma.push_back({Interval(-c, -c + 1), Rat(1)});
    addV(sigma, c, k);
    std::string s = std::to_string(k);
    out.witnesses.push_back({"I" + s, Interval(c, c + 1)});
    out.witnesses.push_back({"Idual" + s, Interval(-c, -c + 1)});
    Rat reach = ratPow(Rat(2), k + 2);
    out.families.push_back({"near" + s, ScanFamily{Interval(c - reach, c + reach), -2, k + 3, 2, 4}});
    out.families.push_back(
        {"nearDual" + s, ScanFamily{Interval(-c - reach, -c + reach), -2, k + 3, 2, 4}});
  }
  Rat edge = 2 * ratPow(Rat(100), K);
  long top = static_cast<long>(std::ceil(std::log2(edge.get_d()))) + 1;
  out.families.push_back({"global", ScanFamily{Interval(-edge, edge), top - 12, top, 2, 2}});
  out.measure = Measure({}, std::move(omega));
  out.sigma = Measure({}, std::move(sigma));
  return out;
}

ConstructionOutput thm5Part2Pair(int N) {
  if (N < 1 || N > 20) throw Error(ErrorCode::ParamDomain, "N must lie in 1..20");
  std::vector<StepPiece> omega;
  for (int n = 1; n <= N; ++n) {
    Rat a = ratPow(Rat(2), n);
    omega.push_back({Interval(a, 2 * a), a});
  }
  ConstructionOutput out{Measure({}, std::move(omega)), Measure::lebesgue(Interval(0, 1)), {}, {}, {}};
  out.witnesses.push_back({"I", Interval(0, 1)});
  Rat edge = ratPow(Rat(2), N + 1);
  out.families.push_back({"window", ScanFamily{Interval(0, edge), -2, N + 1, 2, 2}});
  return out;
}

ConstructionOutput pivotalExamplePair(int N) {
  if (N < 2) throw Error(ErrorCode::ParamDomain, "N must be at least 2");
  std::vector<Atom> sigma;
  for (int n = 2; n <= N; ++n) sigma.push_back({Rat(n), Rat(n)});
  ConstructionOutput out{Measure::atom(0, 1), Measure(std::move(sigma), {}), {}, {}, {}};
  out.witnesses.push_back({"I", Interval(0, 1)});
  return out;
}

std::vector<std::string> constructionNames() {
  return {"lebesgue",      "powerWeight",   "gksCascade",    "remark2Weight",
          "cpWeight",      "thm5Part1Pair", "thm5Part2Pair", "pivotalExamplePair"};
}

namespace {

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& raw) : raw_(raw) {}

  Rat rat(const std::string& key, const Rat& fallback) {
    used_.push_back(key);
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : parseRat(it->second);
  }
  long integer(const std::string& key, long fallback) {
    Rat r = rat(key, Rat(fallback));
    if (r.get_den() != 1 || !r.get_num().fits_slong_p())
      throw Error(ErrorCode::ParamDomain, key + " must be an integer");
    return r.get_num().get_si();
  }
  Interval interval(const std::string& key, const Interval& fallback) {
    used_.push_back(key);
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : parseInterval(it->second);
  }
  std::vector<long> list(const std::string& key) {
    used_.push_back(key);
    std::vector<long> out;
    auto it = raw_.find(key);
    if (it == raw_.end()) return out;
    std::string s = it->second;
    std::size_t start = 0;
    while (start <= s.size()) {
      auto comma = s.find(',', start);
      auto part = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      Rat r = parseRat(part);
      if (r.get_den() != 1) throw Error(ErrorCode::ParamDomain, key + " entries must be integers");
      out.push_back(r.get_num().get_si());
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }
  void finish(const std::string& name) const {
    for (const auto& [k, v] : raw_)
      if (std::find(used_.begin(), used_.end(), k) == used_.end())
        throw Error(ErrorCode::ParamDomain, "unknown parameter '" + k + "' for " + name);
  }

 private:
  const std::map<std::string, std::string>& raw_;
  std::vector<std::string> used_;
};

ConstructionOutput single(Measure m) {
  return ConstructionOutput{std::move(m), std::nullopt, {}, {}, {}};
}

}  // namespace

ConstructionOutput buildConstruction(const std::string& name,
                                     const std::map<std::string, std::string>& raw) {
  Params P(raw);
  ConstructionOutput out = single(Measure());
  if (name == "lebesgue") {
    out = single(lebesgueOn(P.interval("window", Interval(0, 1))));
  } else if (name == "powerWeight") {
    double a = P.rat("alpha", Rat(1, 2)).get_d();
    Interval win = P.interval("window", Interval(-1, 1));
    out = single(powerWeight(a, win, static_cast<int>(P.integer("resolution", 8))));
  } else if (name == "gksCascade") {
    out = single(gksCascade({P.rat("delta", Rat(1, 4)), static_cast<int>(P.integer("depth", 6))}));
  } else if (name == "remark2Weight") {
    out = single(remark2Weight(P.rat("W", Rat(8))));
  } else if (name == "cpWeight") {
    CpWeightParams cp;
    cp.p = P.rat("p", Rat(2)).get_d();
    cp.delta1 = P.rat("delta1", cp.delta1);
    cp.delta2 = P.rat("delta2", cp.delta2);
    cp.gainFactor = P.rat("gainFactor", Rat(1)).get_d();
    cp.maxN = P.integer("maxN", cp.maxN);
    cp.N = P.integer("N", 0);
    long K = P.integer("K", 3);
    auto ns = P.list("n"), is = P.list("i");
    if (!ns.empty()) K = static_cast<long>(ns.size());
    if (K < 1 || K > 12) throw Error(ErrorCode::ParamDomain, "K must lie in 1..12");
    if ((!ns.empty() && static_cast<long>(ns.size()) != K) ||
        (!is.empty() && static_cast<long>(is.size()) != K))
      throw Error(ErrorCode::ParamDomain, "n and i lists must have K entries");
    for (long k = 0; k < K; ++k)
      cp.stages.push_back({ns.empty() ? 0 : ns[static_cast<std::size_t>(k)],
                           is.empty() ? 0 : static_cast<int>(is[static_cast<std::size_t>(k)])});
    P.finish(name);
    return cpWeight(cp).out;
  } else if (name == "thm5Part1Pair") {
    out = thm5Part1Pair(static_cast<int>(P.integer("K", 4)));
  } else if (name == "thm5Part2Pair") {
    out = thm5Part2Pair(static_cast<int>(P.integer("N", 6)));
  } else if (name == "pivotalExamplePair") {
    out = pivotalExamplePair(static_cast<int>(P.integer("N", 10)));
  } else {
    throw Error(ErrorCode::ParamDomain, "unknown construction '" + name + "'");
  }
  P.finish(name);
  return out;
}

}  // namespace wtc
