#include "wtc/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "wtc/error.hpp"

namespace wtc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parseInt(std::string_view key, std::string_view v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw Error(ErrorCode::ParseError, "bad integer for " + std::string(key) + ": '" + std::string(v) + "'");
  return out;
}

double parseReal(std::string_view key, std::string_view v) {
  std::string s(v);
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty())
    throw Error(ErrorCode::ParseError, "bad number for " + std::string(key) + ": '" + s + "'");
  return out;
}

}  // namespace

void setConfigValue(Config& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "minLevel") cfg.minLevel = parseInt<long>(key, value);
  else if (key == "maxLevel") cfg.maxLevel = parseInt<long>(key, value);
  else if (key == "shifts") cfg.shifts = parseInt<int>(key, value);
  else if (key == "base") cfg.base = parseInt<int>(key, value);
  else if (key == "partitionDepth") cfg.partitionDepth = parseInt<int>(key, value);
  else if (key == "maxDepth") cfg.maxDepth = parseInt<int>(key, value);
  else if (key == "greedyCells") cfg.greedyCells = parseInt<int>(key, value);
  else if (key == "slack") cfg.slack = parseReal(key, value);
  else if (key == "maxCandidates") cfg.maxCandidates = parseInt<std::uint64_t>(key, value);
  else if (key == "seed") cfg.seed = parseInt<unsigned long>(key, value);
  else throw Error(ErrorCode::ParseError, "unknown config key '" + std::string(key) + "'");
}

Config parseConfig(std::string_view text) {
  Config cfg;
  std::size_t pos = 0, lineNo = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::ParseError, "config line " + std::to_string(lineNo) + ": expected key=value");
    setConfigValue(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

Config loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseConfig(ss.str());
}

}  // namespace wtc
