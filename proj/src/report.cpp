#include "wtc/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "wtc/error.hpp"

namespace wtc {

std::string formatNumber(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::string escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> splitCsvLine(std::string_view line, std::size_t lineNo) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "csv line " + std::to_string(lineNo) + ": open quote");
  out.push_back(cur);
  return out;
}

double parseValue(const std::string& s, std::size_t lineNo) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::ParseError, "csv line " + std::to_string(lineNo) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::string toCsv(const std::vector<ReportRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += escape(r.claim) + "," + escape(r.param) + "," + escape(r.statistic) + "," +
           formatNumber(r.value) + "," + (r.bound ? formatNumber(*r.bound) : "") + "," +
           escape(r.verdict) + "\n";
  }
  return out;
}

std::vector<ReportRow> parseCsv(std::string_view text) {
  std::vector<ReportRow> rows;
  std::size_t pos = 0, lineNo = 0;
  bool header = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header) {
      if (line != kCsvHeader) throw Error(ErrorCode::ParseError, "csv header must be '" + std::string(kCsvHeader) + "'");
      header = true;
      continue;
    }
    if (line.empty()) continue;
    auto f = splitCsvLine(line, lineNo);
    if (f.size() != 6)
      throw Error(ErrorCode::ParseError, "csv line " + std::to_string(lineNo) + ": expected 6 fields");
    ReportRow r{f[0], f[1], f[2], parseValue(f[3], lineNo), std::nullopt, f[5]};
    if (!f[4].empty()) r.bound = parseValue(f[4], lineNo);
    rows.push_back(std::move(r));
  }
  if (!header) throw Error(ErrorCode::ParseError, "empty csv");
  return rows;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xmlEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string plotSvg(const std::vector<ReportRow>& rows, const PlotOptions& opts) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
  std::vector<std::string> seriesOrder, paramOrder;
  std::map<std::string, std::vector<std::pair<std::string, double>>> series;
  bool numericX = true;
  for (const auto& r : rows) {
    std::string key = r.claim + ":" + r.statistic;
    if (!series.count(key)) seriesOrder.push_back(key);
    series[key].push_back({r.param, r.value});
    if (std::find(paramOrder.begin(), paramOrder.end(), r.param) == paramOrder.end())
      paramOrder.push_back(r.param);
    double x;
    auto [ptr, ec] = std::from_chars(r.param.data(), r.param.data() + r.param.size(), x);
    if (ec != std::errc() || ptr != r.param.data() + r.param.size()) numericX = false;
  }
  auto xOf = [&](const std::string& p) {
    if (numericX) {
      double x = 0;
      std::from_chars(p.data(), p.data() + p.size(), x);
      return x;
    }
    return static_cast<double>(std::find(paramOrder.begin(), paramOrder.end(), p) - paramOrder.begin());
  };
  auto yOf = [&](double v) -> std::optional<double> {
    if (!std::isfinite(v)) return std::nullopt;
    if (opts.logScale) {
      if (v <= 0) return std::nullopt;
      return std::log10(v);
    }
    return v;
  };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& [key, pts] : series)
    for (const auto& [p, v] : pts) {
      auto y = yOf(v);
      if (!y) continue;
      x0 = std::min(x0, xOf(p));
      x1 = std::max(x1, xOf(p));
      y0 = std::min(y0, *y);
      y1 = std::max(y1, *y);
    }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x0 == x1) x0 -= 0.5, x1 += 0.5;
  if (y0 == y1) y0 -= 0.5, y1 += 0.5;
  const double left = 70, right = 200, top = 30, bottom = 50;
  const double pw = opts.width - left - right, ph = opts.height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1 - (y - y0) / (y1 - y0)) * ph; };

  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(opts.width) +
       "\" height=\"" + std::to_string(opts.height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(opts.width) + "\" height=\"" +
       std::to_string(opts.height) + "\" fill=\"white\"/>\n";
  s += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    double yv = y0 + (y1 - y0) * t / 4, xv = x0 + (x1 - x0) * t / 4;
    std::string ylab = opts.logScale ? "1e" + fmt(yv) : fmt(yv);
    s += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(py(yv) + 4) +
         "\" font-size=\"11\" text-anchor=\"end\">" + ylab + "</text>\n";
    std::string xlab = numericX ? fmt(xv) : "";
    if (!numericX) {
      auto idx = static_cast<std::size_t>(std::llround(xv));
      if (std::abs(xv - std::round(xv)) < 1e-9 && idx < paramOrder.size()) xlab = xmlEscape(paramOrder[idx]);
    }
    s += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(top + ph + 18) +
         "\" font-size=\"11\" text-anchor=\"middle\">" + xlab + "</text>\n";
  }
  std::size_t idx = 0;
  for (const auto& key : seriesOrder) {
    const char* color = palette[idx % (sizeof palette / sizeof *palette)];
    std::string points;
    std::string marks;
    for (const auto& [p, v] : series[key]) {
      auto y = yOf(v);
      if (!y) continue;
      std::string xy = fmt(px(xOf(p))) + "," + fmt(py(*y));
      points += (points.empty() ? "" : " ") + xy;
      marks += "<circle cx=\"" + fmt(px(xOf(p))) + "\" cy=\"" + fmt(py(*y)) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    s += marks;
    s += "<text x=\"" + fmt(left + pw + 10) + "\" y=\"" + fmt(top + 14 + 16.0 * static_cast<double>(idx)) +
         "\" font-size=\"11\" fill=\"" + color + "\">" + xmlEscape(key) + "</text>\n";
    ++idx;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace wtc
