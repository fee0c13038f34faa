#pragma once

#include <random>

#include "wtc/measure.hpp"

namespace wtc {

struct RandomMeasureSpec {
  long lo = 0;       // support window [lo, hi] on the lattice (1/q)Z
  long hi = 4;
  long q = 8;
  int maxAtoms = 3;
  int maxPieces = 4;
  long maxNumerator = 9;  // masses and densities are k/q' with k <= maxNumerator
};

/// Nonzero measure with lattice-aligned atoms and disjoint step pieces.
Measure randomMeasure(std::mt19937_64& rng, const RandomMeasureSpec& spec = {});

}  // namespace wtc
