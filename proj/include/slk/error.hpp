#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace slk {

enum class ErrorKind {
  kInvalidArgument,
  kParse,
  kUnknownLeftNode,
  kDuplicateNeighbor,
  kInconsistentRightLength,
  kGenerationFailure,
  kResourceLimit,
  kWorkBudgetExceeded,
  kLeftUniverseMiss,
  kIndexOutOfRange,
  kNotFound,
  kNoPrimeFound,
  kWidthOverflow,
  kIllegalMove,
  kShapeMismatch,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::kParse, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Abstract operation counter shared by every exhaustive routine.
class WorkBudget {
 public:
  static constexpr std::uint64_t kDefault = 200'000'000;

  explicit WorkBudget(std::uint64_t limit = kDefault) : limit_(limit) {}

  // Reads SLK_WORK_BUDGET, falling back to kDefault.
  static WorkBudget from_env();

  void charge(std::uint64_t units, const char* what);
  bool would_exceed(std::uint64_t units) const { return units > limit_ - std::min(used_, limit_); }

  std::uint64_t limit() const { return limit_; }
  std::uint64_t used() const { return used_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

}  // namespace slk
