#pragma once

#include <stdexcept>
#include <string>

namespace dst {

// Library errors derive from Error so callers (the CLI in particular) can map
// them to exit codes without matching on message strings.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed textual or JSON input.
struct ParseError : Error {
  using Error::Error;
};

// An operation was invoked outside its stated domain.
struct PreconditionError : Error {
  using Error::Error;
};

// Rank queries are only defined on well-founded trees.
struct IllFoundedError : PreconditionError {
  using PreconditionError::PreconditionError;
};

}  // namespace dst
