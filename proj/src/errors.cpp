#include "cuspscan/errors.hpp"

namespace cusp {

const char *error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain: return "DOMAIN_ERROR";
    case ErrorCode::kConfig: return "CONFIG_ERROR";
    case ErrorCode::kSolver: return "SOLVER_ERROR";
    case ErrorCode::kContract: return "CONTRACT_VIOLATION";
    case ErrorCode::kReconstruction: return "RECONSTRUCTION_ERROR";
    case ErrorCode::kIo: return "IO_ERROR";
  }
  return "UNKNOWN_ERROR";
}

int error_exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return 2;
    case ErrorCode::kDomain: return 3;
    case ErrorCode::kSolver: return 4;
    case ErrorCode::kContract: return 5;
    case ErrorCode::kReconstruction: return 6;
    case ErrorCode::kIo: return 7;
  }
  return 1;
}

}  // namespace cusp
