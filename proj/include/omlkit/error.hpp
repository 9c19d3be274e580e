#pragma once

#include <stdexcept>
#include <string>

namespace omlkit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// bad arguments: out-of-range ids, invalid parameters, unreadable files
struct InputError : Error {
  using Error::Error;
};

// malformed text input; messages carry the offending line number
struct ParseError : Error {
  using Error::Error;
};

// the data does not form the structure it claims to be (not a lattice,
// axiom failure on construction, inconsistent file contents)
struct StructuralError : Error {
  using Error::Error;
};

// a configured search/enumeration budget was exhausted; distinct from any
// verdict or structural diagnosis
struct ResourceError : Error {
  using Error::Error;
};

// a reconstruction stage could not complete; carries the stage name
struct ReconstructionError : Error {
  ReconstructionError(std::string stage_, const std::string& msg)
      : Error(msg), stage(std::move(stage_)) {}
  std::string stage;
};

}  // namespace omlkit
