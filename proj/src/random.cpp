#include "wtc/random.hpp"

#include <algorithm>
#include <set>

namespace wtc {

Measure randomMeasure(std::mt19937_64& rng, const RandomMeasureSpec& spec) {
  auto pick = [&](long a, long b) { return std::uniform_int_distribution<long>(a, b)(rng); };
  const long first = spec.lo * spec.q, last = spec.hi * spec.q;
  auto value = [&] { return ratFrac(pick(1, spec.maxNumerator), pick(1, 4)); };
  for (;;) {
    std::vector<Atom> atoms;
    for (int k = pick(0, spec.maxAtoms); k > 0; --k) atoms.push_back({ratFrac(pick(first, last), spec.q), value()});
    std::set<long> cuts;
    for (int k = pick(0, spec.maxPieces) * 2; k > 0; --k) cuts.insert(pick(first, last));
    std::vector<long> c(cuts.begin(), cuts.end());
    std::vector<StepPiece> pieces;
    for (std::size_t i = 0; i + 1 < c.size(); i += 2)
      pieces.push_back({Interval(ratFrac(c[i], spec.q), ratFrac(c[i + 1], spec.q)), value()});
    Measure m(std::move(atoms), std::move(pieces));
    if (!m.empty()) return m;
  }
}

}  // namespace wtc
