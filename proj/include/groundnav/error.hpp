#pragma once

#include <stdexcept>
#include <string>

namespace groundnav {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid map document.
class MapError : public Error {
 public:
  using Error::Error;
};

/// An area id that is not part of the map.
class UnknownArea : public Error {
 public:
  explicit UnknownArea(const std::string& id)
      : Error("unknown area id '" + id + "'"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

/// Instruction text that the restricted command grammar does not accept.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A belief update that cannot produce a normalized posterior.
///
/// `step` is the zero-based index in the modifier chain, or -1 when the
/// update was invoked outside of a chain.
class DegenerateUpdate : public Error {
 public:
  DegenerateUpdate(const std::string& what, int step = -1)
      : Error(what), step_(step) {}
  int step() const { return step_; }
  DegenerateUpdate at_step(int step) const {
    return DegenerateUpdate(what(), step);
  }

 private:
  int step_;
};

/// No path between two areas of the adjacency graph.
class Unreachable : public Error {
 public:
  using Error::Error;
};

/// Numerical failure during training (NaN/inf loss or gradient).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace groundnav
