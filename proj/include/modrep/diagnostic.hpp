// Exception raised when a verified identity fails on a concrete instance.
#pragma once

#include <stdexcept>
#include <string>

namespace modrep {

class Contradiction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace modrep
