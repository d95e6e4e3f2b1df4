#ifndef INTERPEVAL_ERROR_HPP_
#define INTERPEVAL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace interpeval {

// Error families map onto process exit codes: data = 1, config = 2,
// backend = 3.
enum class ErrorKind { data, config, backend };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Malformed or inconsistent input data (corpus files, ratings, matrices).
class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorKind::data, message) {}
};

// Invalid configuration: bad flags, bad config files, contract violations
// in backend or study setup.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorKind::config, message) {}
};

// Remote service failure that survived the retry policy, or a response
// that violates the wire contract.
class BackendError : public Error {
 public:
  explicit BackendError(const std::string& message)
      : Error(ErrorKind::backend, message) {}
};

inline const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::data: return "data";
    case ErrorKind::config: return "config";
    case ErrorKind::backend: return "backend";
  }
  return "unknown";
}

}  // namespace interpeval

#endif  // INTERPEVAL_ERROR_HPP_
