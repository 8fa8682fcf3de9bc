#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mtdhg {

// Base class for every domain error raised by the library. `kind()` is a
// stable identifier used by the CLI when emitting structured errors.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define MTDHG_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

MTDHG_DEFINE_ERROR(ShapeError);
MTDHG_DEFINE_ERROR(ProbabilityError);
MTDHG_DEFINE_ERROR(AssumptionViolation);
MTDHG_DEFINE_ERROR(DimensionMismatch);
MTDHG_DEFINE_ERROR(NumericalFailure);
MTDHG_DEFINE_ERROR(BudgetExceeded);
MTDHG_DEFINE_ERROR(NotFound);
MTDHG_DEFINE_ERROR(NotUniform);
MTDHG_DEFINE_ERROR(PreconditionViolated);
MTDHG_DEFINE_ERROR(NotRobustAtBase);
MTDHG_DEFINE_ERROR(RetryExhausted);
MTDHG_DEFINE_ERROR(EmptyData);
MTDHG_DEFINE_ERROR(ConfigError);
MTDHG_DEFINE_ERROR(IoError);
MTDHG_DEFINE_ERROR(ExperimentAborted);

#undef MTDHG_DEFINE_ERROR

// One violated invariant found while validating raw instance data.
struct Violation {
  std::string kind;  // "ShapeError", "ProbabilityError" or "AssumptionViolation"
  std::string message;
};

// Raised by validate_instance; carries every violation, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error("ValidationError", Summarize(violations)),
        violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const noexcept {
    return violations_;
  }

  bool has(const std::string& kind) const {
    for (const auto& v : violations_) {
      if (v.kind == kind) return true;
    }
    return false;
  }

 private:
  static std::string Summarize(const std::vector<Violation>& violations) {
    std::string out = "invalid instance:";
    for (const auto& v : violations) out += "\n  [" + v.kind + "] " + v.message;
    return out;
  }

  std::vector<Violation> violations_;
};

}  // namespace mtdhg
