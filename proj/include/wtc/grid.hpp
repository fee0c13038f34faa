#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "wtc/interval.hpp"
#include "wtc/measure.hpp"
#include "wtc/rational.hpp"

namespace wtc {

/// Cell [index*base^level, (index+1)*base^level] of the standard grid.
struct GridRef {
  int base = 2;
  long level = 0;
  std::int64_t index = 0;

  Interval interval() const;
  GridRef parent() const;
  std::vector<GridRef> children() const;

  friend bool operator==(const GridRef&, const GridRef&) = default;
};

/// Largest enumeration size allowed; WTC_MAX_CANDIDATES overrides the default.
std::uint64_t candidateCap();
void setCandidateCap(std::uint64_t cap);

struct ScanMember {
  Interval interval;
  long level;
  std::int64_t index;
  int shift;
};

/// Grid cells of levels minLevel..maxLevel and their fractional translates
/// (offsets j*cell/shifts) lying inside the window.
struct ScanFamily {
  Interval window;
  long minLevel = 0;
  long maxLevel = 0;
  int base = 2;
  int shifts = 1;

  /// Exact member count.
  BigInt projectedCount() const;
  /// Visits members ordered by (level, index, shift). Throws FamilyTooLarge.
  void forEach(const std::function<void(const ScanMember&)>& visit) const;
  std::vector<Interval> enumerate() const;
};

struct Cell {
  Interval interval;
  bool closedRight = false;

  Closure closure() const { return closedRight ? Closure::Closed : Closure::RightOpen; }
};

/// Disjoint cover of parent; every cell is right-open except the last one.
struct Partition {
  Interval parent;
  std::vector<Cell> cells;
};

/// Number of grid-aligned recursive partitions down to maxDepth, saturating.
std::uint64_t partitionCount(int base, int maxDepth);

void forEachPartition(const Interval& i0, int base, int maxDepth,
                      const std::function<void(const Partition&)>& visit);
std::vector<Partition> partitions(const Interval& i0, int base, int maxDepth);

/// Splits cells one at a time while the evaluator strictly improves; returns
/// the best partition seen.
Partition greedyRefine(const Interval& i0, const std::function<double(const Partition&)>& eval,
                       int maxCells, int base = 2, int maxDepth = 12);

/// Root of the dyadic tree used by the stopping-time and maximal routines.
struct DyadicRoot {
  Interval interval;
  std::optional<GridRef> ref;  // empty for a local tree rooted at the input
  bool snapped = false;
  bool local = false;
};

/// I itself when it is a standard dyadic cell, else the smallest dyadic cell
/// containing it, else (I straddles 0) the local tree rooted at I.
DyadicRoot dyadicRoot(const Interval& iv);

struct StoppingCube {
  Interval interval;
  std::optional<GridRef> ref;
  Rat sigmaMass;
};

struct StoppingForest {
  DyadicRoot root;
  double K = 2;
  long firstLevel = 0;
  std::vector<std::vector<StoppingCube>> levels;  // levels[j] holds m = firstLevel + j
  Rat total;
  bool depthExhausted = false;

  std::size_t cubeCount() const;
};

/// Maximal dyadic subcells with sigma-average above K^m, for every m from
/// the first one with K^m >= average of sigma on the root.
StoppingForest stoppingCubes(const Measure& sigma, const Interval& iv, double K, int maxDepth);

struct SupResult {
  double value = 0;
  std::optional<Interval> argmax;
  std::uint64_t evaluated = 0;
};

/// Max over every interval with endpoints on (1/q)Z inside the window.
SupResult bruteForceSup(const std::function<double(const Interval&)>& fn, const Interval& window,
                        long q);

}  // namespace wtc
