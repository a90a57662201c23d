#pragma once

#include "kirby/diagram.hpp"
#include "kirby/error.hpp"

namespace kirby::detail {

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw MoveError("integer overflow in diagram data");
  return r;
}

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw MoveError("integer overflow in diagram data");
  return r;
}

}  // namespace kirby::detail
