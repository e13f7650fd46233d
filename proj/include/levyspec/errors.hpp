#ifndef LEVYSPEC_ERRORS_HPP
#define LEVYSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace levyspec {

// Error hierarchy shared by all modules. Numerical failures and contract
// violations are distinct so the CLI can map them to exit codes.

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConditionViolated : Error {
  explicit ConditionViolated(const std::string& msg) : Error(msg) {}
};

struct CutoffTooSmall : Error {
  explicit CutoffTooSmall(const std::string& msg) : Error(msg) {}
};

struct UnknownName : Error {
  explicit UnknownName(const std::string& msg) : Error(msg) {}
};

struct NotIntegrable : Error {
  explicit NotIntegrable(const std::string& msg) : Error(msg) {}
};

struct UnsupportedModel : Error {
  explicit UnsupportedModel(const std::string& msg) : Error(msg) {}
};

struct ConvergenceFailure : Error {
  explicit ConvergenceFailure(const std::string& msg) : Error(msg) {}
};

struct DegenerateGap : Error {
  explicit DegenerateGap(const std::string& msg) : Error(msg) {}
};

struct OutOfGrid : Error {
  explicit OutOfGrid(const std::string& msg) : Error(msg) {}
};

struct RowMassError : Error {
  explicit RowMassError(const std::string& msg) : Error(msg) {}
};

struct InsufficientTail : Error {
  explicit InsufficientTail(const std::string& msg) : Error(msg) {}
};

struct AcceptanceOutOfRange : Error {
  explicit AcceptanceOutOfRange(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace levyspec

#endif
