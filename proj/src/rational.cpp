#include "ptkv/rational.hpp"

#include <cctype>

#include "ptkv/error.hpp"

namespace ptkv {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad(std::string_view text, const char* why) {
  throw Error(Errc::kBadRational,
              "bad rational '" + std::string(text) + "': " + why);
}

}  // namespace

Rat parse_rat(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rat value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad(text, "expected a/b");
    mpz_class d{std::string(den)};
    if (d == 0) bad(text, "zero denominator");
    value = Rat(mpz_class(std::string(num)), d);
    value.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || !all_digits(frac)) bad(text, "bad decimal");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    value = Rat(mpz_class(std::string(whole)) * scale +
                    mpz_class(std::string(frac)),
                scale);
    value.canonicalize();
  } else {
    if (!all_digits(body)) bad(text, "expected a number");
    value = Rat(mpz_class(std::string(body)));
  }
  return negative ? Rat(-value) : value;
}

std::string rat_to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string rat_to_json_string(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::kSyntax: return "SyntaxError";
    case Errc::kThresholdOutOfRange: return "ThresholdOutOfRange";
    case Errc::kBadRational: return "BadRational";
    case Errc::kInvalidModel: return "InvalidModel";
    case Errc::kUnknownWorld: return "UnknownWorld";
    case Errc::kUnknownTerm: return "UnknownTerm";
    case Errc::kUnknownValue: return "UnknownValue";
    case Errc::kUnknownAgent: return "UnknownAgent";
    case Errc::kSideConditionViolated: return "SideConditionViolated";
    case Errc::kTooManyVariables: return "TooManyVariables";
    case Errc::kClosureTooLarge: return "ClosureTooLarge";
    case Errc::kTooFewCoordinates: return "TooFewCoordinates";
    case Errc::kFormulaNotInClosure: return "FormulaNotInClosure";
    case Errc::kMissingSolution: return "MissingSolution";
    case Errc::kBoundsTooLarge: return "BoundsTooLarge";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace ptkv
