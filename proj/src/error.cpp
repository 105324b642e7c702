#include "rwt/error.hpp"

namespace rwt {

std::string_view to_string(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::parameter_domain: return "parameter-domain";
    case ErrorCategory::admissibility: return "admissibility";
    case ErrorCategory::range: return "range";
    case ErrorCategory::integration: return "integration";
    case ErrorCategory::configuration: return "configuration";
    case ErrorCategory::input: return "input";
    case ErrorCategory::format: return "format";
    case ErrorCategory::io: return "io";
    case ErrorCategory::unsupported: return "unsupported";
    case ErrorCategory::undefined: return "undefined";
  }
  return "unknown";
}

}  // namespace rwt
