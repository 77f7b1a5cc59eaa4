#pragma once

#include "qtraj/grid.hpp"

#include <span>
#include <vector>

namespace qtraj {

/// Left-to-right 1D unwrap: whenever consecutive phases jump by more than pi,
/// a multiple of 2 pi is added so the jump falls inside (-pi, pi].
std::vector<double> unwrap_phase(std::span<const double> wrapped);

/// arg(psi) at every node, unwrapped from the left edge.
RealField unwrapped_phase(const ComplexField &psi);

} // namespace qtraj
