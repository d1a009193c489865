#pragma once

#include <stdexcept>
#include <string>

namespace qcons {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed digraph input: out-of-range index, self-loop, bad file.
class GraphError : public Error {
 public:
  using Error::Error;
};

// Inconsistent run or experiment parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A state the protocol must never reach (zero-mass unicast, integer overflow).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// A run exceeded one of the worst-case bounds or failed to reach quiescence.
class BoundViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace qcons
