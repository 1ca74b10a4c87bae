#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace depnet {

/// Thrown when an operation needs at least one node (or record) and got none.
class EmptyInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Graph construction rejected the input. `offending()` lists the labels at fault.
class GraphBuildError : public std::invalid_argument {
 public:
  GraphBuildError(const std::string& what, std::vector<std::string> offending)
      : std::invalid_argument(what), offending_(std::move(offending)) {}

  const std::vector<std::string>& offending() const noexcept { return offending_; }

 private:
  std::vector<std::string> offending_;
};

}  // namespace depnet
