#include "wtc/measure_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "wtc/error.hpp"

namespace wtc {

namespace {

constexpr std::string_view kHeader = "# wtc-measure v1";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

Rat number(std::string_view tok, std::size_t line) {
  try {
    return parseRat(tok);
  } catch (const Error&) {
    fail(line, "bad number '" + std::string(tok) + "'");
  }
}

}  // namespace

Measure parseMeasureFile(std::string_view text) {
  std::vector<Atom> atoms;
  std::vector<StepPiece> pieces;
  bool sawHeader = false;
  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineNo;
    std::string_view line = trim(raw);
    if (!sawHeader) {
      if (line.empty()) continue;
      if (line != kHeader) fail(lineNo, "expected header '# wtc-measure v1'");
      sawHeader = true;
      continue;
    }
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    auto tok = tokens(line);
    if (tok[0] == "atom") {
      if (tok.size() != 3) fail(lineNo, "atom takes <x> <mass>");
      Rat x = number(tok[1], lineNo), m = number(tok[2], lineNo);
      if (m < 0) throw Error(ErrorCode::NegativeMass, "line " + std::to_string(lineNo));
      atoms.push_back({x, m});
    } else if (tok[0] == "step") {
      if (tok.size() != 4) fail(lineNo, "step takes <a> <b> <density>");
      Rat a = number(tok[1], lineNo), b = number(tok[2], lineNo), d = number(tok[3], lineNo);
      if (!(a < b)) fail(lineNo, "step needs a < b");
      if (d < 0) throw Error(ErrorCode::NegativeMass, "line " + std::to_string(lineNo));
      pieces.push_back({Interval(a, b), d});
    } else {
      fail(lineNo, "unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!sawHeader) fail(lineNo, "missing header '# wtc-measure v1'");
  return Measure(std::move(atoms), std::move(pieces));
}

std::string writeMeasureFile(const Measure& mu) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& a : mu.atoms()) out += "atom " + toString(a.x) + " " + toString(a.mass) + "\n";
  for (const auto& p : mu.pieces())
    out += "step " + toString(p.support.lo()) + " " + toString(p.support.hi()) + " " +
           toString(p.density) + "\n";
  return out;
}

Measure loadMeasure(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseMeasureFile(ss.str());
}

void saveMeasure(const std::string& path, const Measure& mu) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Usage, "cannot write " + path);
  out << writeMeasureFile(mu);
}

}  // namespace wtc
