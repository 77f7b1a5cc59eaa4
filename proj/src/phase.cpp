#include "qtraj/phase.hpp"

#include <cmath>
#include <numbers>

namespace qtraj {

std::vector<double> unwrap_phase(std::span<const double> wrapped) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> out(wrapped.begin(), wrapped.end());
  double offset = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double jump = wrapped[i] - wrapped[i - 1];
    if (std::abs(jump) > std::numbers::pi)
      offset -= two_pi * std::round(jump / two_pi);
    out[i] = wrapped[i] + offset;
  }
  return out;
}

RealField unwrapped_phase(const ComplexField &psi) {
  std::vector<double> wrapped(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    wrapped[i] = std::arg(psi[i]);
  return RealField(psi.grid, unwrap_phase(wrapped), psi.time);
}

} // namespace qtraj
