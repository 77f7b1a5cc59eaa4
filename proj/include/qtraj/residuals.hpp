#pragma once

// Residual checks of the exact equations obeyed by the complex action
// Sbar = -i hbar ln psi:
//
//   quantum Hamilton-Jacobi:  dSbar/dt + (dSbar/dx)^2 / 2m + V - (i hbar / 2m) d2Sbar/dx2 = 0
//   complex velocity form:    dv/dt + v dv/dx + V'/m - (i hbar / 2m) d2v/dx2 = 0,  v = Sbar'/m

#include "qtraj/analytic.hpp"
#include "qtraj/grid.hpp"
#include "qtraj/potential.hpp"

#include <span>

namespace qtraj {

/// Pointwise |QHJ residual| given Sbar and its time derivative at the same time.
RealField qhj_residual(const ComplexField &sbar, const ComplexField &sbar_rate,
                       const Potential &potential, const PhysParams &params);

/// Same, with dSbar/dt taken by finite differences between stored states at
/// equally spaced times (central difference about the middle state, or the
/// midpoint of two states). The residual is reported at that time.
RealField qhj_residual(std::span<const ComplexField> states, const Potential &potential,
                       const PhysParams &params);

/// Pointwise |complex-velocity residual|; the Lagrangian derivative uses the
/// same finite-difference rule as the states overload above.
RealField complex_velocity_residual(std::span<const ComplexField> states,
                                    const PhysParams &params, const Potential &potential);

/// Sbar(x,t) = -i hbar ln psi for the free packet, from the closed-form logarithm.
ComplexField free_packet_complex_action(const GaussianPacketSpec &spec, const Grid1D &grid,
                                        double t);

/// Sbar(x,t) for the oscillator coherent packet.
ComplexField ho_complex_action(const OscillatorSpec &spec, const Grid1D &grid, double t);

} // namespace qtraj
