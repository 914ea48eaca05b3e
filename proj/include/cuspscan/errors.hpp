#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cusp {

/// Machine-readable failure categories. The CLI maps each one to a distinct
/// exit status and prints the code name on a single line.
enum class ErrorCode {
  kDomain,
  kConfig,
  kSolver,
  kContract,
  kReconstruction,
  kIo,
};

const char *error_code_name(ErrorCode code);
int error_exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct DomainError : Error {
  explicit DomainError(const std::string &what) : Error(ErrorCode::kDomain, what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string &what) : Error(ErrorCode::kConfig, what) {}
};

struct ContractViolation : Error {
  explicit ContractViolation(const std::string &what)
      : Error(ErrorCode::kContract, what) {}
};

struct ReconstructionError : Error {
  explicit ReconstructionError(const std::string &what)
      : Error(ErrorCode::kReconstruction, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string &what) : Error(ErrorCode::kIo, what) {}
};

/// Krylov iteration hit its cap. Carries the relative residual after every
/// iteration so callers can judge stagnation vs. slow convergence.
class SolverError : public Error {
 public:
  SolverError(const std::string &what, std::vector<double> history)
      : Error(ErrorCode::kSolver, what), history_(std::move(history)) {}
  const std::vector<double> &residual_history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace cusp
