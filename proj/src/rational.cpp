#include "wtc/rational.hpp"

#include <cctype>
#include <cmath>

#include "wtc/error.hpp"

namespace wtc {

std::string_view toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::OverlappingSteps: return "OverlappingSteps";
    case ErrorCode::FamilyTooLarge: return "FamilyTooLarge";
    case ErrorCode::AtomPresent: return "AtomPresent";
    case ErrorCode::ZeroDensity: return "ZeroDensity";
    case ErrorCode::SingularSample: return "SingularSample";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
    case ErrorCode::ParamDomain: return "ParamDomain";
    case ErrorCode::StageOverflow: return "StageOverflow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownClaim: return "UnknownClaim";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

namespace {

bool allDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
}

}  // namespace

Rat parseRat(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rat out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!allDigits(num) || !allDigits(den)) bad(text);
    BigInt d{std::string(den), 10};
    if (d == 0) bad(text);
    out = Rat(BigInt{std::string(num), 10}, d);
    out.canonicalize();
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) bad(text);
    if ((!whole.empty() && !allDigits(whole)) || (!frac.empty() && !allDigits(frac))) bad(text);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    BigInt num{std::string(whole.empty() ? "0" : whole) + std::string(frac), 10};
    out = Rat(num, scale);
    out.canonicalize();
  } else {
    if (!allDigits(s)) bad(text);
    out = Rat(BigInt{std::string(s), 10});
  }
  return negative ? Rat(-out) : out;
}

std::string toString(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat fromDouble(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::ParamDomain, "non-finite value");
  Rat r;
  mpq_set_d(r.get_mpq_t(), x);
  return r;
}

Rat ratPow(const Rat& r, long e) {
  Rat out;
  const unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), r.get_num_mpz_t(), n);
  mpz_pow_ui(den.get_mpz_t(), r.get_den_mpz_t(), n);
  if (e >= 0) {
    out = Rat(num, den);
  } else {
    out = Rat(den, num);
  }
  out.canonicalize();
  return out;
}

BigInt ratFloor(const Rat& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

BigInt ratCeil(const Rat& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

}  // namespace wtc
