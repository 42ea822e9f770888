#include "gafzeros/intensity.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gafzeros/numeric.hpp"

namespace gafzeros {

namespace {

constexpr double kPi = std::numbers::pi;

// int over the disk |z - center| < breaks.back() of f(z) dm(z) in polar
// coordinates; radial Gauss-Legendre panels between consecutive breaks,
// periodic trapezoid in angle. Doubles the resolution until two levels
// agree.
double PolarIntegral(const std::function<double(Complex)>& f, Complex center,
                     const std::vector<double>& breaks) {
  const auto& rule = GaussLegendre16();
  auto level = [&](int panels, int angles) {
    double total = 0.0;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
      const double width = (breaks[b + 1] - breaks[b]) / panels;
      for (int p = 0; p < panels; ++p) {
        const double mid = breaks[b] + (p + 0.5) * width;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const double t = mid + 0.5 * width * rule.nodes[i];
          double ring = 0.0;
          for (int a = 0; a < angles; ++a) {
            ring += f(center + std::polar(t, 2.0 * kPi * a / angles));
          }
          total += 0.5 * width * rule.weights[i] * t * ring * 2.0 * kPi / angles;
        }
      }
    }
    return total;
  };
  double previous = level(1, 32);
  for (int k = 1; k <= 5; ++k) {
    const double current = level(1 << k, 32 << k);
    if (std::abs(current - previous) <= 1e-11 * std::abs(current) + 1e-14) {
      return current;
    }
    previous = current;
  }
  return previous;
}

double RectangleIntegral(const std::function<double(Complex)>& f,
                         const Domain& rect) {
  const auto& rule = GaussLegendre16();
  const Complex lo = rect.lower();
  const Complex hi = rect.upper();
  auto level = [&](int panels) {
    const double wx = (hi.real() - lo.real()) / panels;
    const double wy = (hi.imag() - lo.imag()) / panels;
    double total = 0.0;
    for (int px = 0; px < panels; ++px) {
      for (int py = 0; py < panels; ++py) {
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const double x = lo.real() + (px + 0.5 + 0.5 * rule.nodes[i]) * wx;
          for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double y = lo.imag() + (py + 0.5 + 0.5 * rule.nodes[j]) * wy;
            total += 0.25 * wx * wy * rule.weights[i] * rule.weights[j] *
                     f({x, y});
          }
        }
      }
    }
    return total;
  };
  double previous = level(1);
  for (int k = 1; k <= 4; ++k) {
    const double current = level(1 << k);
    if (std::abs(current - previous) <= 1e-11 * std::abs(current) + 1e-14) {
      return current;
    }
    previous = current;
  }
  return previous;
}

void CheckRegion(const CurveFamily& family, const Domain& region) {
  if (family.variant() == CurveFamily::Variant::kHyperbolic
          ? region.MaxModulus() >= 1.0
          : !family.domain().ContainsDomain(region)) {
    throw OutsideDomain("region " + region.ToString() + " exceeds the " +
                        family.Name() + " domain");
  }
}

std::function<double(Complex)> DensityFunction(const CurveFamily& family,
                                               const Domain& region) {
  if (family.HasClosedForm()) {
    return [family](Complex z) { return DensityClosed(family, z); };
  }
  const double h = DefaultStep(region);
  return [family, h](Complex z) { return DensityNumeric(family, z, h); };
}

}  // namespace

double DensityClosed(const CurveFamily& family, Complex z) {
  family.CheckPoint(z);
  const double r2 = std::norm(z);
  switch (family.variant()) {
    case CurveFamily::Variant::kPlanar:
      return 1.0 / kPi;
    case CurveFamily::Variant::kHyperbolic:
      return 1.0 / (kPi * (1.0 - r2) * (1.0 - r2));
    case CurveFamily::Variant::kKostlan:
      return family.kostlan_degree() / (kPi * (1.0 + r2) * (1.0 + r2));
    case CurveFamily::Variant::kExplicit:
      break;
  }
  throw InvalidArgument(
      "explicit families have no closed-form density; use DensityNumeric");
}

double DensityFromLogDiagonal(const std::function<double(Complex)>& log_diagonal,
                              Complex z, double h) {
  if (!(h > 0.0)) throw InvalidArgument("h must be positive");
  const auto u = [&](Complex p) { return 0.5 * log_diagonal(p); };
  return RichardsonLaplacian(u, z, h) / (2.0 * kPi);
}

double DensityNumeric(const CurveFamily& family, Complex z, double h) {
  if (family.HasCommonZero()) {
    throw InvalidArgument(
        "curve components share a zero; log ||Psi|| is singular there");
  }
  return DensityFromLogDiagonal(
      [&family](Complex p) { return LogSquaredNorm(family, p); }, z, h);
}

double DefaultStep(const Domain& region) { return 1e-3 * region.Scale(); }

IntensityMeasure IntensityMeasure::For(const CurveFamily& family, double step) {
  return IntensityMeasure(
      family, family.HasClosedForm() ? Form::kClosed : Form::kFiniteDifference,
      step);
}

IntensityMeasure IntensityMeasure::FiniteDifference(const CurveFamily& family,
                                                    double step) {
  if (family.HasCommonZero()) {
    throw InvalidArgument(
        "curve components share a zero; log ||Psi|| is singular there");
  }
  return IntensityMeasure(family, Form::kFiniteDifference, step);
}

double IntensityMeasure::Density(Complex z) const {
  if (form_ == Form::kClosed) return DensityClosed(family_, z);
  return DensityNumeric(family_, z, step_);
}

double MuRegion(const CurveFamily& family, const Domain& region) {
  CheckRegion(family, region);
  if (family.HasClosedForm() && region.IsDisk() &&
      region.center() == Complex(0.0)) {
    const double r2 = region.radius() * region.radius();
    switch (family.variant()) {
      case CurveFamily::Variant::kPlanar:
        return r2;
      case CurveFamily::Variant::kHyperbolic:
        return r2 / (1.0 - r2);
      case CurveFamily::Variant::kKostlan:
        return family.kostlan_degree() * r2 / (1.0 + r2);
      default:
        break;
    }
  }
  const auto density = DensityFunction(family, region);
  if (region.IsDisk()) {
    return PolarIntegral(density, region.center(), {0.0, region.radius()});
  }
  return RectangleIntegral(density, region);
}

double MuAgainst(const CurveFamily& family, const TestFunction& phi) {
  const Domain support = phi.Support();
  CheckRegion(family, support);
  if (family.HasClosedForm() && phi.center() == Complex(0.0)) {
    // Closed-form densities are radial about the origin.
    const auto radial = [&](double t) {
      return phi.Profile(t) * DensityClosed(family, Complex(t, 0.0)) * 2.0 *
             kPi * t;
    };
    using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
    return Quad::integrate(radial, 0.0, phi.inner(), 15, 1e-13) +
           Quad::integrate(radial, phi.inner(), phi.outer(), 15, 1e-13);
  }
  const auto density = DensityFunction(family, support);
  return PolarIntegral(
      [&](Complex z) { return phi(z) * density(z); }, phi.center(),
      {0.0, phi.inner(), phi.outer()});
}

}  // namespace gafzeros
