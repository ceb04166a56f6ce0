#pragma once

#include <stdexcept>

namespace emv {

// Raised when two independently computed routes to the same value disagree,
// or when a witness that must exist by theorem cannot be found.  Signals a
// bug in this library (or an unsound input that slipped past validation),
// never a normal user error.
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace emv
