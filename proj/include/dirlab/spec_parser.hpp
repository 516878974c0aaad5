#pragma once

// Text form of test functions, as accepted by the CLI:
//
//   spec := atom | sum(spec, spec) | product(spec, spec) | power(spec, real)
//   atom := monomial:int | fab:real:real | powerouter:real[:real]
//         | blaschke:complex-list | atomic:real | kernel:complex:real
//         | counterexample:real:real:real
//
// Complex literals are written re+imi (e.g. 0.3-0.2i, 0.5i). List items
// are separated by ';', or by ',' when the next item is a number.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dirlab/zoo.hpp"

namespace dirlab::replicate {

class SpecError : public std::runtime_error {
 public:
  enum class Kind { syntax, semantic };

  SpecError(Kind kind, std::size_t position, std::vector<std::string> expected, const std::string& message);

  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Kind kind_;
  std::size_t position_;
  std::vector<std::string> expected_;
};

zoo::TestFunction parse_function_spec(std::string_view text);

/// Parses a complex literal on its own (used for CLI points).
Complex parse_complex(std::string_view text);

}  // namespace dirlab::replicate
