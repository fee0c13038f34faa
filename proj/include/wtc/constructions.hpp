#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wtc/grid.hpp"
#include "wtc/interval.hpp"
#include "wtc/measure.hpp"
#include "wtc/rational.hpp"

namespace wtc {

struct NamedInterval {
  std::string name;
  Interval interval;
};

struct ConstructionOutput {
  Measure measure;               // omega, or the weight
  std::optional<Measure> sigma;  // second measure of a pair
  std::vector<NamedInterval> witnesses;
  std::vector<std::pair<std::string, double>> stats;
  std::vector<std::pair<std::string, ScanFamily>> families;

  const Interval& witness(const std::string& name) const;
  double stat(const std::string& name) const;
};

Measure lebesgueOn(const Interval& iv);

/// Cell averages of |x|^alphaExp on cells of length 2^-resolution starting at
/// window.lo. Throws NonIntegrable when alphaExp <= -1.
Measure powerWeight(double alphaExp, const Interval& window, int resolution);

struct CascadeParams {
  Rat delta;
  int depth = 0;
};

/// Exact cell masses of the triadic cascade on [0,1], left to right.
std::vector<Rat> cascadeMasses(const Rat& delta, int depth);
Measure gksCascade(const CascadeParams& params);

/// Lebesgue on [-W,-1] and [1,W].
Measure remark2Weight(const Rat& W);

struct CpStage {
  long n = 0;  // 0: choose automatically
  int i = 0;   // 0: choose automatically
};

struct CpWeightParams {
  double p = 2;
  Rat delta1{1, 6};
  Rat delta2{1, 18};
  std::vector<CpStage> stages;
  long N = 0;  // support exponent; 0: max n_k + 1
  long maxN = 40;
  int maxI = 12;
  double gainFactor = 1;  // required gain is gainFactor * 2^k
};

struct CpStageReport {
  int k = 0;
  long n = 0;
  int i = 0;
  Interval third;  // left third of I_n
  Interval a0;     // innermost cell, carries the cascade
  Interval a1;     // 3 * a0
  double eSize = 0;       // |E| / |J|
  double eMassRatio = 0;  // w(E) / w(J)
  double witnessRatio = 0;
  double minGain = 0;  // min over stage intervals of integral / w(I)
  Interval gainWitness;
};

struct CpWeightOutput {
  ConstructionOutput out;
  std::vector<CpStageReport> stages;
  long N = 0;
};

/// Throws ParamDomain or StageOverflow.
CpWeightOutput cpWeight(const CpWeightParams& params);
/// The same measure for fixed (n_k, i_k) without any checks.
Measure cpWeightMeasure(const CpWeightParams& params, const std::vector<CpStage>& stages, long N);

/// Triadic cells of a1 with length >= 3^-depth, a1 itself included.
std::vector<Interval> triadicCells(const Interval& a1, int depth);

ConstructionOutput thm5Part1Pair(int K);
ConstructionOutput thm5Part2Pair(int N);
ConstructionOutput pivotalExamplePair(int N);

/// Names accepted by buildConstruction.
std::vector<std::string> constructionNames();
/// Builds a named construction from string parameters. Throws ParamDomain.
ConstructionOutput buildConstruction(const std::string& name,
                                     const std::map<std::string, std::string>& params);

}  // namespace wtc
