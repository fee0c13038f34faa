#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wtc/config.hpp"
#include "wtc/constructions.hpp"
#include "wtc/report.hpp"

namespace wtc {

enum class Expect {
  Bounded,      // later size grows by less than the slack
  Stable,       // later size within the slack in either direction
  Divergent,    // ratio (or increment) between sizes at least the floor
  AtMost,       // every value <= bound
  AtLeast,      // every value >= bound
  Inconclusive, // no expected verdict
  Report        // context value, never fails
};

std::string_view toString(Expect e);

struct StatSpec {
  std::string name;
  Expect expect = Expect::Bounded;
  double floor = 0;        // Divergent: minimum ratio or increment
  bool increment = false;  // Divergent: compare differences instead of ratios
  double slack = 0;        // Bounded/Stable: 0 means the configured slack
};

struct ClaimInfo {
  std::string id;
  std::string summary;
  std::string param;         // meaning of the scale argument
  std::string defaultScale;
  bool inconclusive = false;
  std::vector<StatSpec> stats;
};

const std::vector<ClaimInfo>& claimRegistry();
/// Throws UnknownClaim.
const ClaimInfo& claimInfo(const std::string& id);

struct ClaimReport {
  std::string id;
  std::vector<ReportRow> rows;
  std::vector<NamedInterval> witnesses;
  std::vector<std::string> notes;
  bool pass = true;
};

/// Sizes evaluated for a scale (one or two values, as strings).
std::vector<std::string> claimSizes(const std::string& id, const std::string& scale);

/// Evaluates the claim's statistics at its sizes and attaches verdicts.
/// Throws UnknownClaim, CapExceeded.
ClaimReport runClaim(const std::string& id, const std::optional<std::string>& scale,
                     const Config& cfg);

/// One row block per value; trend verdicts compare consecutive values.
ClaimReport sweepClaim(const std::string& id, const std::vector<std::string>& values,
                       const Config& cfg);

}  // namespace wtc
