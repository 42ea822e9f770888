#include "gafzeros/numeric.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

namespace gafzeros {

ValueAndDerivative EvaluatePolynomial(std::span<const Complex> coeffs,
                                      Complex z) {
  Complex value = 0.0;
  Complex derivative = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    derivative = derivative * z + value;
    value = value * z + *it;
  }
  return {value, derivative};
}

double AbsolutePolynomial(std::span<const Complex> coeffs, double modulus) {
  double total = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    total = total * modulus + std::abs(*it);
  }
  return total;
}

namespace {

// Parlett-Reinsch balancing with power-of-two scalings, applied to the
// off-diagonal part so the eigenvalues are unchanged.
void BalanceCompanionMatrix(Eigen::MatrixXcd& matrix) {
  const Eigen::Index n = matrix.rows();
  constexpr double kGamma = 0.9;
  bool changed = true;
  int sweeps = 0;
  while (changed && sweeps++ < 100) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      double row_norm = 0.0;
      double col_norm = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i) continue;
        row_norm += std::abs(matrix(i, k));
        col_norm += std::abs(matrix(k, i));
      }
      if (row_norm == 0.0 || col_norm == 0.0) continue;
      int exponent = 0;
      std::frexp(row_norm / col_norm, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double scaled_col = std::ldexp(col_norm, exponent);
      const double scaled_row = std::ldexp(row_norm, -exponent);
      if (scaled_col + scaled_row < kGamma * (col_norm + row_norm)) {
        changed = true;
        const double down = std::ldexp(1.0, -exponent);
        const double up = std::ldexp(1.0, exponent);
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == i) continue;
          matrix(i, k) *= down;
          matrix(k, i) *= up;
        }
      }
    }
  }
}

}  // namespace

std::vector<Complex> CompanionEigenvalues(std::span<const Complex> coeffs) {
  if (coeffs.size() <= 1) return {};
  const auto degree = static_cast<Eigen::Index>(coeffs.size() - 1);
  const Complex lead = coeffs.back();
  if (lead == Complex(0.0)) {
    throw InvalidArgument("polynomial has a zero leading coefficient");
  }
  if (degree == 1) return {-coeffs[0] / lead};

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  companion.diagonal(-1).setOnes();
  for (Eigen::Index k = 0; k < degree; ++k) {
    companion(k, degree - 1) = -coeffs[static_cast<std::size_t>(k)] / lead;
  }
  BalanceCompanionMatrix(companion);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("companion eigenvalue iteration did not converge");
  }
  const Eigen::VectorXcd& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

namespace {

double FivePoint(const std::function<double(Complex)>& u, Complex z,
                 double h) {
  const double center = u(z);
  const double sum = u(z + h) + u(z - h) + u(z + Complex(0.0, h)) +
                     u(z - Complex(0.0, h));
  return (sum - 4.0 * center) / (h * h);
}

}  // namespace

double RichardsonLaplacian(const std::function<double(Complex)>& u, Complex z,
                           double h) {
  const double coarse = FivePoint(u, z, h);
  const double fine = FivePoint(u, z, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

Interval WilsonInterval(std::int64_t successes, std::int64_t trials,
                        double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  // The endpoints are exact at 0 and n successes; keep rounding from leaking.
  const double lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double upper = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lower, upper};
}

const GaussRule& GaussLegendre16() {
  static const GaussRule rule = [] {
    using Gauss = boost::math::quadrature::gauss<double, 16>;
    GaussRule r;
    const auto& abscissa = Gauss::abscissa();
    const auto& weights = Gauss::weights();
    for (std::size_t i = abscissa.size(); i-- > 0;) {
      r.nodes.push_back(-abscissa[i]);
      r.weights.push_back(weights[i]);
    }
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      r.nodes.push_back(abscissa[i]);
      r.weights.push_back(weights[i]);
    }
    return r;
  }();
  return rule;
}

double LogFactorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace gafzeros
