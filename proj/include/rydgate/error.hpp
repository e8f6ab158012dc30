#pragma once

#include <stdexcept>
#include <string>

namespace rydgate {

enum class ErrorKind { domain, convergence, integration, tracking, config };

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::integration: return "integration";
    case ErrorKind::tracking: return "tracking";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

// Carries a module-qualified code such as "atomic.convergence".
class Error : public std::runtime_error {
 public:
  Error(std::string module, ErrorKind kind, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)), kind_(kind) {}

  const std::string& module() const { return module_; }
  ErrorKind kind() const { return kind_; }
  std::string code() const { return module_ + "." + kind_name(kind_); }

  // process exit status used by the CLI
  int exit_status() const { return 10 + static_cast<int>(kind_); }

 private:
  std::string module_;
  ErrorKind kind_;
};

inline Error domain_error(const std::string& module, const std::string& what) {
  return Error(module, ErrorKind::domain, what);
}
inline Error convergence_error(const std::string& module, const std::string& what) {
  return Error(module, ErrorKind::convergence, what);
}
inline Error integration_error(const std::string& module, const std::string& what) {
  return Error(module, ErrorKind::integration, what);
}
inline Error tracking_error(const std::string& module, const std::string& what) {
  return Error(module, ErrorKind::tracking, what);
}
inline Error config_error(const std::string& module, const std::string& what) {
  return Error(module, ErrorKind::config, what);
}

}  // namespace rydgate
