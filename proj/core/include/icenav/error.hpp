#pragma once

#include <stdexcept>
#include <string>

namespace icenav {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or config document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input outside the domain an operation accepts (empty window, bad value).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Mesh geometry violates the quadtree leaf-cover contract.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// The vessel cannot make way against the current in a cell.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A waypoint falls outside the mesh or inside a blocked cell.
class PlacementError : public Error {
 public:
  using Error::Error;
};

/// No sequence of accessible cells connects two waypoints.
class NoRouteError : public Error {
 public:
  using Error::Error;
};

}  // namespace icenav
