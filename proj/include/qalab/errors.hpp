#pragma once

#include <stdexcept>

namespace qalab {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct NotPsd : Error { using Error::Error; };
struct NotACrossPair : Error { using Error::Error; };
struct NumericFailure : Error { using Error::Error; };
struct ZeroArgument : Error { using Error::Error; };
struct Unsupported : Error { using Error::Error; };
struct ConstructionFailure : Error { using Error::Error; };

}  // namespace qalab
