#pragma once

#include "qtraj/grid.hpp"

#include <memory>
#include <string_view>

namespace qtraj {

/// External potential V(x). Three kinds: free (V = 0), harmonic
/// (V = m omega^2 x^2 / 2) and tabulated (cubic interpolation of grid samples).
class Potential {
public:
  enum class Kind { Free, Harmonic, Tabulated };

  static Potential free();
  static Potential harmonic(double mass, double omega);
  static Potential tabulated(const RealField &samples);

  Kind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;
  double omega() const noexcept { return omega_; }

  double value(double x) const;
  double gradient(double x) const;

  RealField sample(const Grid1D &grid) const;
  RealField sample_gradient(const Grid1D &grid) const;

private:
  Potential() = default;

  Kind kind_ = Kind::Free;
  double mass_ = 1.0;
  double omega_ = 0.0;
  std::shared_ptr<const RealField> table_;
};

} // namespace qtraj
