#ifndef STAGFV_ERRORS_HPP
#define STAGFV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stagfv {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ZeroPivot : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KindMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidCount : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidRatio : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct QualityFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  long line_number;
};

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RepresentationMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace stagfv

#endif
