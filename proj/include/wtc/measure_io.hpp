#pragma once

#include <string>
#include <string_view>

#include "wtc/measure.hpp"

namespace wtc {

/// `# wtc-measure v1` header, then `atom <x> <mass>` and `step <a> <b> <density>`
/// lines. Throws ParseError (with line number), NegativeMass, OverlappingSteps.
Measure parseMeasureFile(std::string_view text);
std::string writeMeasureFile(const Measure& mu);

Measure loadMeasure(const std::string& path);
void saveMeasure(const std::string& path, const Measure& mu);

}  // namespace wtc
