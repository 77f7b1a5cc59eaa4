#pragma once

#include <cstdint>

namespace qtraj {

/// n!! = n(n-2)(n-4)..., with (-1)!! = 0!! = 1. Throws for n < -1 or on overflow.
std::uint64_t double_factorial(int n);

/// Floating-point n!!, usable past the 64-bit range (exact while below 2^53).
double double_factorial_value(int n);

/// n! as a double (exact up to n = 22).
double factorial(int n);

} // namespace qtraj
