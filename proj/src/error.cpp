#include "slk/error.hpp"

#include <cstdlib>
#include <string>

namespace slk {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kParse: return "parse-error";
    case ErrorKind::kUnknownLeftNode: return "unknown-left-node";
    case ErrorKind::kDuplicateNeighbor: return "duplicate-neighbor";
    case ErrorKind::kInconsistentRightLength: return "inconsistent-right-length";
    case ErrorKind::kGenerationFailure: return "generation-failure";
    case ErrorKind::kResourceLimit: return "resource-limit";
    case ErrorKind::kWorkBudgetExceeded: return "work-budget-exceeded";
    case ErrorKind::kLeftUniverseMiss: return "left-universe-miss";
    case ErrorKind::kIndexOutOfRange: return "index-out-of-range";
    case ErrorKind::kNotFound: return "not-found";
    case ErrorKind::kNoPrimeFound: return "no-prime-found";
    case ErrorKind::kWidthOverflow: return "width-overflow";
    case ErrorKind::kIllegalMove: return "illegal-move";
    case ErrorKind::kShapeMismatch: return "shape-mismatch";
  }
  return "unknown";
}

WorkBudget WorkBudget::from_env() {
  if (const char* env = std::getenv("SLK_WORK_BUDGET")) {
    try {
      return WorkBudget(std::stoull(env));
    } catch (const std::exception&) {
      throw Error(ErrorKind::kInvalidArgument,
                  std::string("SLK_WORK_BUDGET is not a number: ") + env);
    }
  }
  return WorkBudget();
}

void WorkBudget::charge(std::uint64_t units, const char* what) {
  if (would_exceed(units)) {
    used_ = limit_;
    throw Error(ErrorKind::kWorkBudgetExceeded,
                std::string(what) + ": work budget of " + std::to_string(limit_) +
                    " units exceeded");
  }
  used_ += units;
}

}  // namespace slk
