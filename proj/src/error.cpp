#include "cpsg/error.hpp"

namespace cpsg {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kDegenerateModulus: return "degenerate_modulus";
    case ErrorCode::kBranchPoint: return "branch_point";
    case ErrorCode::kNonGeneric: return "non_generic";
    case ErrorCode::kSingular: return "singular";
    case ErrorCode::kBranchCut: return "branch_cut";
    case ErrorCode::kNotMonomial: return "not_monomial";
    case ErrorCode::kCapExceeded: return "cap_exceeded";
    case ErrorCode::kSearchFailed: return "search_failed";
    case ErrorCode::kUnknownCommand: return "unknown_command";
    case ErrorCode::kInvalidConfig: return "invalid_config";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace cpsg
