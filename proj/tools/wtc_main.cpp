#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "wtc/claims.hpp"
#include "wtc/config.hpp"
#include "wtc/constructions.hpp"
#include "wtc/error.hpp"
#include "wtc/functionals.hpp"
#include "wtc/measure_io.hpp"
#include "wtc/report.hpp"

using namespace wtc;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;

std::pair<std::string, std::string> splitKeyValue(const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorCode::Usage, "expected key=value, got '" + kv + "'");
  return {kv.substr(0, eq), kv.substr(eq + 1)};
}

std::pair<long, long> parseLevels(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) throw Error(ErrorCode::Usage, "levels must be lo..hi");
  try {
    return {std::stol(text.substr(0, dots)), std::stol(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::Usage, "levels must be lo..hi, got '" + text + "'");
  }
}

// name=lo..hi[:step] or name=v1,v2,...
std::vector<std::string> sweepValues(const std::string& spec, std::string& name) {
  auto [key, range] = splitKeyValue(spec);
  name = key;
  std::vector<std::string> out;
  auto dots = range.find("..");
  if (dots == std::string::npos) {
    std::stringstream ss(range);
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) out.push_back(item);
    return out;
  }
  std::string hiPart = range.substr(dots + 2), stepPart = "1";
  if (auto colon = hiPart.find(':'); colon != std::string::npos) {
    stepPart = hiPart.substr(colon + 1);
    hiPart = hiPart.substr(0, colon);
  }
  Rat lo = parseRat(range.substr(0, dots)), hi = parseRat(hiPart), step = parseRat(stepPart);
  if (step <= 0) throw Error(ErrorCode::Usage, "sweep step must be positive");
  for (Rat v = lo; v <= hi; v += step) out.push_back(toString(v));
  return out;
}

void writeText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Usage, "cannot write " + path);
  f << text;
}

std::string readText(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Usage, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void printReport(const ClaimReport& rep) {
  for (const auto& w : rep.witnesses)
    std::cerr << "witness " << w.name << " = " << toString(w.interval) << "\n";
  for (const auto& n : rep.notes) std::cerr << "note " << n << "\n";
  std::cerr << rep.id << ": " << (rep.pass ? "PASS" : "FAIL") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wtc: weighted two-weight condition toolkit"};
  app.require_subcommand(1);

  std::string configPath;
  std::vector<std::string> overrides;
  app.add_option("--config", configPath, "key=value config file");
  app.add_option("--set", overrides, "config override key=value");

  // construct
  auto* construct = app.add_subcommand("construct", "build a named measure and write it");
  std::string cName, cOut, cOutSigma;
  std::vector<std::string> cParams;
  construct->add_option("name", cName)->required();
  construct->add_option("--param", cParams, "k=v");
  construct->add_option("--out", cOut)->required();
  construct->add_option("--out-sigma", cOutSigma);

  // eval
  auto* evalCmd = app.add_subcommand("eval", "evaluate a functional on one interval");
  std::string eName, eOmega, eSigma, eInterval, eKernel = "standard";
  double eP = 2, eAlpha = 0;
  bool eExact = false, eRoot = false;
  evalCmd->add_option("functional", eName)->required();
  evalCmd->add_option("--omega", eOmega)->required();
  evalCmd->add_option("--sigma", eSigma);
  evalCmd->add_option("--interval", eInterval)->required();
  evalCmd->add_option("--p", eP);
  evalCmd->add_option("--alpha", eAlpha);
  evalCmd->add_option("--kernel", eKernel, "standard or reproducing");
  evalCmd->add_flag("--exact", eExact, "exact rational path (p = 2, alpha = 0)");
  evalCmd->add_flag("--root", eRoot, "root form of the Ap functionals");

  // sup
  auto* supCmd = app.add_subcommand("sup", "maximize a functional over a scan family");
  std::string sName, sOmega, sSigma, sWindow, sLevels = "-4..0";
  int sBase = 2, sShifts = 3, sFactor = 2;
  double sP = 2;
  supCmd->add_option("functional", sName)->required();
  supCmd->add_option("--omega", sOmega)->required();
  supCmd->add_option("--sigma", sSigma);
  supCmd->add_option("--window", sWindow)->required();
  supCmd->add_option("--levels", sLevels, "lo..hi");
  supCmd->add_option("--base", sBase);
  supCmd->add_option("--shifts", sShifts);
  supCmd->add_option("--factor", sFactor, "dilation factor for doubling");
  supCmd->add_option("--p", sP);

  // verify
  auto* verify = app.add_subcommand("verify", "run a claim at its two sizes");
  std::string vClaim, vScale, vOut;
  verify->add_option("claim", vClaim)->required();
  verify->add_option("--scale", vScale);
  verify->add_option("--out", vOut, "CSV path, stdout if omitted");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a claim over a parameter range");
  std::string wClaim, wParam, wOut;
  sweep->add_option("claim", wClaim)->required();
  sweep->add_option("--param", wParam, "name=lo..hi[:step] or name=v1,v2")->required();
  sweep->add_option("--out", wOut);

  // plot
  auto* plot = app.add_subcommand("plot", "SVG chart of a report CSV");
  std::string pIn, pOut;
  bool pLog = false;
  plot->add_option("csv", pIn)->required();
  plot->add_option("--out", pOut)->required();
  plot->add_flag("--log", pLog);

  auto* list = app.add_subcommand("list", "list claims and constructions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Config cfg = configPath.empty() ? Config{} : loadConfig(configPath);
    for (const auto& kv : overrides) {
      auto [k, v] = splitKeyValue(kv);
      setConfigValue(cfg, k, v);
    }

    if (*list) {
      for (const auto& c : claimRegistry())
        std::cout << "claim " << c.id << " (" << c.param << ", default " << c.defaultScale
                  << "): " << c.summary << "\n";
      for (const auto& n : constructionNames()) std::cout << "construction " << n << "\n";
      return kOk;
    }

    if (*construct) {
      std::map<std::string, std::string> params;
      for (const auto& kv : cParams) {
        auto [k, v] = splitKeyValue(kv);
        params[k] = params.count(k) ? params[k] + "," + v : v;
      }
      auto out = buildConstruction(cName, params);
      saveMeasure(cOut, out.measure);
      if (out.sigma) saveMeasure(cOutSigma.empty() ? cOut + ".sigma" : cOutSigma, *out.sigma);
      for (const auto& w : out.witnesses)
        std::cout << "witness " << w.name << " " << toString(w.interval) << "\n";
      for (const auto& [k, v] : out.stats) std::cout << "stat " << k << " " << formatNumber(v) << "\n";
      return kOk;
    }

    if (*evalCmd) {
      Measure w = loadMeasure(eOmega);
      Measure s = eSigma.empty() ? w : loadMeasure(eSigma);
      Interval I = parseInterval(eInterval);
      KernelKind kernel;
      if (eKernel == "standard") kernel = KernelKind::Standard;
      else if (eKernel == "reproducing") kernel = KernelKind::Reproducing;
      else throw Error(ErrorCode::Usage, "unknown kernel " + eKernel);
      const Exponents ex{eP, eAlpha, kernel};
      if (auto kind = parseApKind(eName)) {
        if (eExact) std::cout << toString(apLocalPowerExact(w, s, I, *kind)) << "\n";
        else
          std::cout << formatNumber(eRoot ? apLocal(w, s, I, ex, *kind)
                                          : apLocalPower(w, s, I, ex, *kind))
                    << "\n";
      } else if (eName == "avg") {
        if (eExact) std::cout << toString(avgDensityExact(w, I)) << "\n";
        else std::cout << formatNumber(avgDensity(w, I, eAlpha)) << "\n";
      } else if (eName == "poisson") {
        if (eExact) std::cout << toString(poissonExact(I, w)) << "\n";
        else std::cout << formatNumber(poisson(I, w, {kernel, eAlpha})) << "\n";
      } else if (eName == "maximal") {
        if (eExact) std::cout << toString(maximalIndicatorIntegralExact(w, I, std::lround(eP))) << "\n";
        else std::cout << formatNumber(maximalIndicatorIntegral(w, I, eP)) << "\n";
      } else if (eName == "energy") {
        std::cout << (eExact ? toString(energyE2(I, w)) : formatNumber(energyE2(I, w).get_d()))
                  << "\n";
      } else if (eName == "oneWeightAp") {
        std::cout << formatNumber(oneWeightAp(w, I, eP)) << "\n";
      } else if (eName == "sawyer") {
        std::cout << formatNumber(sawyerRatio(w, s, I, eP, cfg.maxDepth)) << "\n";
      } else {
        throw Error(ErrorCode::Usage, "unknown functional " + eName);
      }
      return kOk;
    }

    if (*supCmd) {
      if (cfg.maxCandidates > 0) setCandidateCap(cfg.maxCandidates);
      Measure w = loadMeasure(sOmega);
      Measure s = sSigma.empty() ? w : loadMeasure(sSigma);
      auto [lo, hi] = parseLevels(sLevels);
      const ScanFamily fam{parseInterval(sWindow), lo, hi, sBase, sShifts};
      const Exponents ex{sP, 0, KernelKind::Standard};
      std::optional<Interval> at;
      double value = 0;
      if (auto kind = parseApKind(sName)) {
        auto r = supOverFamily(
            [&](const Interval& I) { return apLocalPower(w, s, I, ex, *kind); }, fam);
        value = r.value;
        at = r.argmax;
      } else if (sName == "avg") {
        auto r = supOverFamily([&](const Interval& I) { return avgDensity(w, I); }, fam);
        value = r.value;
        at = r.argmax;
      } else if (sName == "oneWeightAp") {
        auto r = supOverFamily([&](const Interval& I) { return oneWeightAp(w, I, sP); }, fam);
        value = r.value;
        at = r.argmax;
      } else if (sName == "doubling" || sName == "reverseDoubling") {
        auto r = sName == "doubling" ? doublingConstant(w, fam, sFactor)
                                     : reverseDoublingConstant(w, fam, sFactor);
        value = r.value;
        at = r.witness;
      } else {
        throw Error(ErrorCode::Usage, "unknown functional " + sName);
      }
      std::cout << formatNumber(value);
      if (at) std::cout << " at " << toString(*at);
      std::cout << "\n";
      return kOk;
    }

    if (*verify) {
      auto rep = runClaim(vClaim, vScale.empty() ? std::nullopt : std::optional(vScale), cfg);
      writeText(vOut, toCsv(rep.rows));
      printReport(rep);
      return rep.pass ? kOk : kMismatch;
    }

    if (*sweep) {
      std::string name;
      auto values = sweepValues(wParam, name);
      const auto& info = claimInfo(wClaim);
      if (name != info.param && name != "scale")
        throw Error(ErrorCode::Usage, wClaim + " sweeps over '" + info.param + "'");
      auto rep = sweepClaim(wClaim, values, cfg);
      writeText(wOut, toCsv(rep.rows));
      printReport(rep);
      return rep.pass ? kOk : kMismatch;
    }

    if (*plot) {
      auto rows = parseCsv(readText(pIn));
      writeText(pOut, plotSvg(rows, PlotOptions{pLog}));
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
