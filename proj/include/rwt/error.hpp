#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rwt {

/// Broad failure classes. The CLI maps each to its own exit code.
enum class ErrorCategory {
  parameter_domain,
  admissibility,
  range,
  integration,
  configuration,
  input,
  format,
  io,
  unsupported,
  undefined,
};

std::string_view to_string(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace rwt
