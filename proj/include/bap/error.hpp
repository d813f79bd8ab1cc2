#pragma once

#include <stdexcept>
#include <string>

namespace bap {

/// Raised for violated preconditions and solver failures across the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A checked guarantee (feasibility, dominance) failed at run time.
class AssertionFailure : public Error {
 public:
  explicit AssertionFailure(const std::string& what) : Error(what) {}
};

}  // namespace bap
