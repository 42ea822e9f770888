#ifndef GAFZEROS_INTENSITY_HPP_
#define GAFZEROS_INTENSITY_HPP_

#include <functional>

#include "gafzeros/bump.hpp"
#include "gafzeros/ensembles.hpp"

namespace gafzeros {

// First intensity of the zero process, per unit area:
// (1 / 2 pi) Laplacian log ||Psi||, i.e. (1 / 4 pi) Laplacian log K(z, z).

// Planar 1/pi, hyperbolic (1/pi)(1-|z|^2)^-2, Kostlan (N/pi)(1+|z|^2)^-2.
// Throws InvalidArgument for Explicit families.
double DensityClosed(const CurveFamily& family, Complex z);

// Five-point Laplacian of u = (1/2) log K(z, z), Richardson-extrapolated
// over h and h/2. Rejects Explicit curves whose components share a zero.
double DensityNumeric(const CurveFamily& family, Complex z, double h);

// Same stencil for any log-diagonal: log_diagonal(z) = log K(z, z).
double DensityFromLogDiagonal(const std::function<double(Complex)>& log_diagonal,
                              Complex z, double h);

// Default stencil step for work on `region`: 1e-3 times its scale.
double DefaultStep(const Domain& region);

class IntensityMeasure {
 public:
  enum class Form { kClosed, kFiniteDifference };

  // Closed form when the family has one, finite differences otherwise.
  static IntensityMeasure For(const CurveFamily& family, double step);
  static IntensityMeasure FiniteDifference(const CurveFamily& family,
                                           double step);

  Form form() const { return form_; }
  double step() const { return step_; }
  double Density(Complex z) const;

 private:
  IntensityMeasure(const CurveFamily& family, Form form, double step)
      : family_(family), form_(form), step_(step) {}

  CurveFamily family_;
  Form form_;
  double step_;
};

// mu(region). Exact antiderivatives for closed-form families on disks
// centered at 0, 2-D quadrature otherwise.
double MuRegion(const CurveFamily& family, const Domain& region);

// int phi dmu.
double MuAgainst(const CurveFamily& family, const TestFunction& phi);

}  // namespace gafzeros

#endif  // GAFZEROS_INTENSITY_HPP_
