#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ptkv {

// Stable error categories. The numeric values are mirrored by the C API
// status codes in ptkv.h; do not reorder.
enum class Errc {
  kSyntax = 1,
  kThresholdOutOfRange = 2,
  kBadRational = 3,
  kInvalidModel = 4,
  kUnknownWorld = 5,
  kUnknownTerm = 6,
  kUnknownValue = 7,
  kUnknownAgent = 8,
  kSideConditionViolated = 9,
  kTooManyVariables = 10,
  kClosureTooLarge = 11,
  kTooFewCoordinates = 12,
  kFormulaNotInClosure = 13,
  kMissingSolution = 14,
  kBoundsTooLarge = 15,
  kInvalidArgument = 16,
  kInternal = 17,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(message), code_(code), position_(position) {}

  Errc code() const { return code_; }
  // Byte offset into the parsed text, for syntax-level errors.
  std::optional<std::size_t> position() const { return position_; }

 private:
  Errc code_;
  std::optional<std::size_t> position_;
};

}  // namespace ptkv
