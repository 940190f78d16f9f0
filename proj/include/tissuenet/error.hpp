#pragma once

#include <stdexcept>
#include <string>

namespace tissuenet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed network or module specification (bad names, ranges, dangling references).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Errors raised by the spatial backends.
class SpatialError : public Error {
 public:
  enum class Code {
    unallocated_identifier,
    same_identifier,
    double_allocation,
    occupied_location,
    unknown_generator,
    unknown_node,
    duplicate_node,
    infeasible,
  };

  SpatialError(Code code, const std::string& what) : Error(what), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

/// An analysis that needs the full state space was given a truncated graph.
class TruncatedGraphError : public Error {
 public:
  using Error::Error;
};

}  // namespace tissuenet
