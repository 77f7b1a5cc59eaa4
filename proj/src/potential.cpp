#include "qtraj/potential.hpp"

#include "qtraj/errors.hpp"
#include "qtraj/interpolation.hpp"

#include <cmath>

namespace qtraj {

Potential Potential::free() { return Potential(); }

Potential Potential::harmonic(double mass, double omega) {
  if (!(mass > 0.0) || !(omega > 0.0) || !std::isfinite(mass) || !std::isfinite(omega))
    throw InvalidArgument("harmonic potential needs positive finite mass and omega");
  Potential p;
  p.kind_ = Kind::Harmonic;
  p.mass_ = mass;
  p.omega_ = omega;
  return p;
}

Potential Potential::tabulated(const RealField &samples) {
  require_finite(samples, "tabulated potential");
  Potential p;
  p.kind_ = Kind::Tabulated;
  p.table_ = std::make_shared<const RealField>(samples);
  return p;
}

std::string_view Potential::name() const noexcept {
  switch (kind_) {
  case Kind::Free:
    return "free";
  case Kind::Harmonic:
    return "harmonic";
  case Kind::Tabulated:
    return "tabulated";
  }
  return "unknown";
}

double Potential::value(double x) const {
  switch (kind_) {
  case Kind::Free:
    return 0.0;
  case Kind::Harmonic:
    return 0.5 * mass_ * omega_ * omega_ * x * x;
  case Kind::Tabulated:
    return cubic_interpolate(table_->grid, table_->values, x);
  }
  return 0.0;
}

double Potential::gradient(double x) const {
  switch (kind_) {
  case Kind::Free:
    return 0.0;
  case Kind::Harmonic:
    return mass_ * omega_ * omega_ * x;
  case Kind::Tabulated:
    return cubic_derivative(table_->grid, table_->values, x);
  }
  return 0.0;
}

RealField Potential::sample(const Grid1D &grid) const {
  return qtraj::sample(grid, [this](double x) { return value(x); });
}

RealField Potential::sample_gradient(const Grid1D &grid) const {
  return qtraj::sample(grid, [this](double x) { return gradient(x); });
}

} // namespace qtraj
