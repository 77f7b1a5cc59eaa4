#include "qtraj/special.hpp"

#include "qtraj/errors.hpp"

#include <limits>
#include <string>

namespace qtraj {

std::uint64_t double_factorial(int n) {
  if (n < -1)
    throw InvalidArgument("double_factorial: n must be >= -1, got " + std::to_string(n));
  std::uint64_t out = 1;
  for (int k = n; k > 1; k -= 2) {
    const auto factor = static_cast<std::uint64_t>(k);
    if (out > std::numeric_limits<std::uint64_t>::max() / factor)
      throw InvalidArgument("double_factorial: " + std::to_string(n) + "!! overflows 64 bits");
    out *= factor;
  }
  return out;
}

double double_factorial_value(int n) {
  if (n < -1)
    throw InvalidArgument("double_factorial: n must be >= -1, got " + std::to_string(n));
  double out = 1.0;
  for (int k = n; k > 1; k -= 2)
    out *= k;
  return out;
}

double factorial(int n) {
  if (n < 0)
    throw InvalidArgument("factorial: negative argument");
  double out = 1.0;
  for (int k = 2; k <= n; ++k)
    out *= k;
  return out;
}

} // namespace qtraj
