#ifndef BNNLP_ERRORS_HPP
#define BNNLP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bnnlp {

// Error categories. The CLI maps these onto process exit codes.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitData = 3, kExitNumeric = 4 };

/// Process exit code for an error escaping the command line tool. Bad or
/// unreadable inputs count as data errors.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const InvalidInput*>(&e) || dynamic_cast<const IoError*>(&e))
    return kExitData;
  if (dynamic_cast<const NumericError*>(&e)) return kExitNumeric;
  return kExitFailure;
}

}  // namespace bnnlp

#endif  // BNNLP_ERRORS_HPP
