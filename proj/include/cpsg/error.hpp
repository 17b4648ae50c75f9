#pragma once

#include <stdexcept>
#include <string>

namespace cpsg {

// Values are shared with the C API (cpsg_status) and must not be renumbered.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kDegenerateModulus = 3,
  kBranchPoint = 4,
  kNonGeneric = 5,
  kSingular = 6,
  kBranchCut = 7,
  kNotMonomial = 8,
  kCapExceeded = 9,
  kSearchFailed = 10,
  kUnknownCommand = 11,
  kInvalidConfig = 12,
  kInternal = 13,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace cpsg
