#include "gafzeros/bump.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace gafzeros {

namespace {

double Smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double SmoothstepPrime(double u) {
  const double v = u * (1.0 - u);
  return 30.0 * v * v;
}
double SmoothstepSecond(double u) {
  return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
}

// int_a^b |f|, splitting at the sign changes of f found on a uniform scan
// and refined by bracketing.
double IntegrateAbsolute(const std::function<double(double)>& f, double a,
                         double b) {
  constexpr int kScan = 512;
  std::vector<double> breaks{a};
  double prev_t = a;
  double prev_f = f(a + 1e-12 * (b - a));
  for (int i = 1; i <= kScan; ++i) {
    const double t = a + (b - a) * i / kScan;
    const double ft = f(i == kScan ? b - 1e-12 * (b - a) : t);
    if ((prev_f < 0.0 && ft > 0.0) || (prev_f > 0.0 && ft < 0.0)) {
      boost::uintmax_t iterations = 200;
      const auto root = boost::math::tools::toms748_solve(
          f, prev_t, t, boost::math::tools::eps_tolerance<double>(52),
          iterations);
      breaks.push_back(0.5 * (root.first + root.second));
    }
    prev_t = t;
    prev_f = ft;
  }
  breaks.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double t) { return std::abs(f(t)); }, breaks[i], breaks[i + 1], 8,
        1e-12);
  }
  return total;
}

}  // namespace

TestFunction TestFunction::Bump(double inner, double outer, Complex center) {
  if (!(inner > 0.0) || !(outer > inner) || !std::isfinite(outer)) {
    throw InvalidArgument("bump: require 0 < r < R (got r = " +
                          std::to_string(inner) +
                          ", R = " + std::to_string(outer) + ")");
  }
  TestFunction phi;
  phi.inner_ = inner;
  phi.outer_ = outer;
  phi.center_ = center;
  const double two_pi = 2.0 * std::numbers::pi;
  phi.laplacian_l1_ =
      two_pi * IntegrateAbsolute(
                   [&phi](double t) {
                     return t * phi.ProfileSecondDerivative(t) +
                            phi.ProfileDerivative(t);
                   },
                   inner, outer);
  const double second =
      IntegrateAbsolute([&phi](double t) { return t * phi.ProfileSecondDerivative(t); },
                        inner, outer);
  const double first = IntegrateAbsolute(
      [&phi](double t) { return phi.ProfileDerivative(t); }, inner, outer);
  phi.triangle_bound_ = two_pi * (second + first);
  return phi;
}

double TestFunction::Profile(double t) const {
  if (t <= inner_) return 1.0;
  if (t >= outer_) return 0.0;
  return Smoothstep((outer_ - t) / (outer_ - inner_));
}

double TestFunction::ProfileDerivative(double t) const {
  if (t <= inner_ || t >= outer_) return 0.0;
  return -SmoothstepPrime((outer_ - t) / (outer_ - inner_)) / (outer_ - inner_);
}

double TestFunction::ProfileSecondDerivative(double t) const {
  if (t <= inner_ || t >= outer_) return 0.0;
  const double width = outer_ - inner_;
  return SmoothstepSecond((outer_ - t) / width) / (width * width);
}

}  // namespace gafzeros
