#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace kht {

// exact integer scalar for all homological arithmetic
using Int = boost::multiprecision::cpp_int;

inline int sgn(const Int& v) { return v.sign(); }

inline Int abs_int(const Int& v) { return v < 0 ? Int(-v) : v; }

// thrown when a computation would exceed a configured resource cap
struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kht
