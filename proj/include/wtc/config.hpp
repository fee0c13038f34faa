#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace wtc {

struct Config {
  long minLevel = -12;
  long maxLevel = 12;
  int shifts = 3;
  int base = 2;
  int partitionDepth = 4;
  int maxDepth = 12;
  int greedyCells = 16;
  double slack = 1.05;
  std::uint64_t maxCandidates = 0;  // 0: keep the current cap
  unsigned long seed = 20240601;
};

/// key=value lines, `#` comments. Throws ParseError on unknown keys or values.
Config parseConfig(std::string_view text);
Config loadConfig(const std::string& path);
/// Applies one key=value setting. Throws ParseError.
void setConfigValue(Config& cfg, std::string_view key, std::string_view value);

}  // namespace wtc
