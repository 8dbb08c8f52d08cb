#pragma once

#include <cstdint>

namespace mpmm {

/// Exact tally of scalar multiplications and additions/subtractions performed
/// on matrix elements. Monotone nondecreasing while a computation runs.
struct OpCounter {
  std::uint64_t mul = 0;
  std::uint64_t addsub = 0;

  OpCounter& operator+=(const OpCounter& o) {
    mul += o.mul;
    addsub += o.addsub;
    return *this;
  }
  friend OpCounter operator+(OpCounter a, const OpCounter& b) { return a += b; }
  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

}  // namespace mpmm
