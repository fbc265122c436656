#pragma once

#include <stdexcept>
#include <string>

namespace polarsat {

// Base class for all domain errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DuplicateVariable : Error { using Error::Error; };
struct BadIndex : Error { using Error::Error; };
struct BadAssignment : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct BadParams : Error { using Error::Error; };
struct BadWidth : Error { using Error::Error; };
struct Unsupported : Error { using Error::Error; };
struct NotSatisfiable : Error { using Error::Error; };
struct Undefined : Error { using Error::Error; };
struct EmptyConditioning : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace polarsat
