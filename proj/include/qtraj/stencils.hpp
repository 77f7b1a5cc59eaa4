#pragma once

#include "qtraj/grid.hpp"

#include <span>

namespace qtraj {

// Fourth-order finite differences on a uniform grid. Interior nodes use the
// 5-point central stencils; the two nodes nearest each edge use one-sided
// stencils of the same order. Both operators are exact on polynomials of
// degree <= 4. Non-finite input throws NonFiniteValue with the node index.

RealField gradient(const RealField &f);
ComplexField gradient(const ComplexField &f);

RealField laplacian(const RealField &f);
ComplexField laplacian(const ComplexField &f);

// Raw-buffer forms used on hot paths (hierarchy right-hand side). `out` must
// have the same length as `f`; no finiteness check.
void gradient_into(std::span<const double> f, double dx, std::span<double> out);
void laplacian_into(std::span<const double> f, double dx, std::span<double> out);

} // namespace qtraj
