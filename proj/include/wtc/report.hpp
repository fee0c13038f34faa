#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wtc {

struct ReportRow {
  std::string claim;
  std::string param;
  std::string statistic;
  double value = 0;
  std::optional<double> bound;
  std::string verdict;
};

inline constexpr std::string_view kCsvHeader = "claim,param,statistic,value,bound,verdict";

/// Shortest round-trip decimal for finite values; inf/-inf/nan otherwise.
std::string formatNumber(double v);

std::string toCsv(const std::vector<ReportRow>& rows);
/// Throws ParseError on a bad header, field count or number.
std::vector<ReportRow> parseCsv(std::string_view text);

struct PlotOptions {
  bool logScale = false;
  int width = 720;
  int height = 440;
};

/// One polyline per (claim, statistic); x is the numeric param or, failing
/// that, the order of first appearance.
std::string plotSvg(const std::vector<ReportRow>& rows, const PlotOptions& opts = {});

}  // namespace wtc
