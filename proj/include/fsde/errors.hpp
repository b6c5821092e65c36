#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fsde {

/// Argument outside an operation's mathematical domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Result would exceed the representable double range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Noise, iterate or config grids disagree.
class GridMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A simulated state became NaN or infinite. Carries the first offending
/// (path, node) in path-major order.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(std::size_t path, std::size_t node)
      : std::runtime_error("non-finite state at path " + std::to_string(path) +
                           ", node " + std::to_string(node)),
        path_(path),
        node_(node) {}

  std::size_t path() const noexcept { return path_; }
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t path_;
  std::size_t node_;
};

}  // namespace fsde
