#pragma once

#include <stdexcept>
#include <string>

namespace acn {

// NaN/Inf surfaced from network math or optimizer updates.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class EmptyMemoryError : public std::runtime_error {
 public:
  explicit EmptyMemoryError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace acn
