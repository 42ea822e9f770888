#include "gafzeros/ensembles.hpp"

#include <cmath>
#include <utility>

#include <Eigen/LU>

#include "gafzeros/numeric.hpp"

namespace gafzeros {

namespace {

std::vector<Complex> RowPolynomial(const Eigen::MatrixXcd& coeffs,
                                   Eigen::Index row) {
  std::vector<Complex> p(static_cast<std::size_t>(coeffs.cols()));
  for (Eigen::Index k = 0; k < coeffs.cols(); ++k) {
    p[static_cast<std::size_t>(k)] = coeffs(row, k);
  }
  while (!p.empty() && p.back() == Complex(0.0)) p.pop_back();
  return p;
}

bool DetectCommonZero(const Eigen::MatrixXcd& coeffs) {
  Eigen::Index pivot_row = -1;
  std::size_t pivot_size = 0;
  for (Eigen::Index j = 0; j < coeffs.rows(); ++j) {
    const auto p = RowPolynomial(coeffs, j);
    if (p.empty()) continue;
    if (pivot_row < 0 || p.size() < pivot_size) {
      pivot_row = j;
      pivot_size = p.size();
    }
  }
  if (pivot_row < 0 || pivot_size <= 1) return false;
  const auto pivot = RowPolynomial(coeffs, pivot_row);
  for (Complex root : CompanionEigenvalues(pivot)) {
    bool shared = true;
    for (Eigen::Index j = 0; j < coeffs.rows() && shared; ++j) {
      const auto p = RowPolynomial(coeffs, j);
      const double scale = AbsolutePolynomial(p, std::abs(root));
      shared = std::abs(EvaluatePolynomial(p, root).value) <= 1e-8 * scale;
    }
    if (shared) return true;
  }
  return false;
}

// Ratio s_j^2 / s_{j-1}^2 for the diagonal families.
double SquaredScaleRatio(const CurveFamily& family, int j) {
  switch (family.variant()) {
    case CurveFamily::Variant::kPlanar:
      return 1.0 / j;
    case CurveFamily::Variant::kHyperbolic:
      return 1.0;
    case CurveFamily::Variant::kKostlan: {
      const int n = family.kostlan_degree();
      return static_cast<double>(n - j + 1) / j;
    }
    case CurveFamily::Variant::kExplicit:
      break;
  }
  throw InvalidArgument("explicit families have no diagonal basis");
}

Complex DiagonalPartialSum(const CurveFamily& family, Complex zw, int order) {
  if (family.variant() == CurveFamily::Variant::kKostlan) {
    order = std::min(order, family.kostlan_degree());
  }
  Complex term = 1.0;
  Complex sum = 1.0;
  for (int j = 1; j <= order; ++j) {
    term *= zw * SquaredScaleRatio(family, j);
    sum += term;
  }
  return sum;
}

// sum_{j > order} r^{2j} / j!, summed term by term in log space.
double PlanarTail(double r, int order) {
  if (r == 0.0) return 0.0;
  const double log_r2 = 2.0 * std::log(r);
  double sum = 0.0;
  for (int j = order + 1;; ++j) {
    const double term = std::exp(j * log_r2 - LogFactorial(j));
    sum += term;
    if (j > r * r && term <= 1e-18 * sum) break;
    if (j > order + 100000) break;
  }
  return sum;
}

}  // namespace

CurveFamily CurveFamily::Planar(double window_radius) {
  return CurveFamily(Variant::kPlanar, Domain::PlaneWindow(window_radius));
}

CurveFamily CurveFamily::Hyperbolic() {
  return CurveFamily(Variant::kHyperbolic, Domain::Disk({0.0, 0.0}, 1.0));
}

CurveFamily CurveFamily::Kostlan(int degree, double window_radius) {
  if (degree < 1) throw InvalidArgument("kostlan.degree must be >= 1");
  CurveFamily family(Variant::kKostlan, Domain::PlaneWindow(window_radius));
  family.kostlan_degree_ = degree;
  return family;
}

CurveFamily CurveFamily::Explicit(Eigen::MatrixXcd coeffs,
                                  double window_radius) {
  if (coeffs.rows() < 1 || coeffs.cols() < 1) {
    throw InvalidArgument("explicit.coeffs must be a non-empty matrix");
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(coeffs);
  lu.setThreshold(1e-10);
  if (lu.rank() < coeffs.rows()) {
    throw InvalidArgument(
        "explicit.coeffs rows must be linearly independent (rank " +
        std::to_string(lu.rank()) + " < " + std::to_string(coeffs.rows()) +
        ")");
  }
  CurveFamily family(Variant::kExplicit, Domain::PlaneWindow(window_radius));
  family.has_common_zero_ = DetectCommonZero(coeffs);
  family.coeffs_ = std::move(coeffs);
  return family;
}

bool CurveFamily::IsFinite() const {
  return variant_ == Variant::kKostlan || variant_ == Variant::kExplicit;
}

int CurveFamily::Dimension() const {
  switch (variant_) {
    case Variant::kKostlan:
      return kostlan_degree_ + 1;
    case Variant::kExplicit:
      return static_cast<int>(coeffs_.rows());
    default:
      return -1;
  }
}

std::string CurveFamily::Name() const {
  switch (variant_) {
    case Variant::kPlanar:
      return "planar";
    case Variant::kHyperbolic:
      return "hyperbolic";
    case Variant::kKostlan:
      return "kostlan";
    case Variant::kExplicit:
      return "explicit";
  }
  return "unknown";
}

void CurveFamily::CheckPoint(Complex z) const {
  if (variant_ == Variant::kHyperbolic) {
    if (!(std::abs(z) < 1.0)) {
      throw OutsideDomain("hyperbolic family requires |z| < 1");
    }
    return;
  }
  if (!domain_.Contains(z)) {
    throw OutsideDomain("point outside the " + Name() + " domain " +
                        domain_.ToString());
  }
}

double CurveFamily::LogBasisScale(int j) const {
  switch (variant_) {
    case Variant::kPlanar:
      return -0.5 * LogFactorial(j);
    case Variant::kHyperbolic:
      return 0.0;
    case Variant::kKostlan:
      return 0.5 * (LogFactorial(kostlan_degree_) - LogFactorial(j) -
                    LogFactorial(kostlan_degree_ - j));
    case Variant::kExplicit:
      break;
  }
  throw InvalidArgument("explicit families have no diagonal basis");
}

double SquaredNorm(const CurveFamily& family, Complex z) {
  family.CheckPoint(z);
  const double r2 = std::norm(z);
  switch (family.variant()) {
    case CurveFamily::Variant::kPlanar:
      return std::exp(r2);
    case CurveFamily::Variant::kHyperbolic:
      return 1.0 / (1.0 - r2);
    case CurveFamily::Variant::kKostlan:
      return std::pow(1.0 + r2, family.kostlan_degree());
    case CurveFamily::Variant::kExplicit:
      break;
  }
  const auto& c = family.coefficients();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < c.rows(); ++j) {
    const Eigen::VectorXcd row = c.row(j).transpose();
    sum += std::norm(
        EvaluatePolynomial({row.data(), static_cast<std::size_t>(row.size())}, z)
            .value);
  }
  return sum;
}

double LogSquaredNorm(const CurveFamily& family, Complex z) {
  family.CheckPoint(z);
  const double r2 = std::norm(z);
  switch (family.variant()) {
    case CurveFamily::Variant::kPlanar:
      return r2;
    case CurveFamily::Variant::kHyperbolic:
      return -std::log1p(-r2);
    case CurveFamily::Variant::kKostlan:
      return family.kostlan_degree() * std::log1p(r2);
    case CurveFamily::Variant::kExplicit:
      break;
  }
  return std::log(SquaredNorm(family, z));
}

Complex Kernel(const CurveFamily& family, Complex z, Complex w) {
  family.CheckPoint(z);
  family.CheckPoint(w);
  const Complex zw = z * std::conj(w);
  switch (family.variant()) {
    case CurveFamily::Variant::kPlanar:
      return std::exp(zw);
    case CurveFamily::Variant::kHyperbolic:
      return 1.0 / (1.0 - zw);
    case CurveFamily::Variant::kKostlan: {
      Complex result = 1.0;
      for (int j = 0; j < family.kostlan_degree(); ++j) result *= 1.0 + zw;
      return result;
    }
    case CurveFamily::Variant::kExplicit:
      break;
  }
  const auto& c = family.coefficients();
  Complex sum = 0.0;
  for (Eigen::Index j = 0; j < c.rows(); ++j) {
    const Eigen::VectorXcd row = c.row(j).transpose();
    const std::span<const Complex> p(row.data(),
                                     static_cast<std::size_t>(row.size()));
    sum += EvaluatePolynomial(p, z).value *
           std::conj(EvaluatePolynomial(p, w).value);
  }
  return sum;
}

double TruncatedSquaredNorm(const CurveFamily& family, Complex z, int order) {
  return TruncatedKernel(family, z, z, order).real();
}

Complex TruncatedKernel(const CurveFamily& family, Complex z, Complex w,
                        int order) {
  family.CheckPoint(z);
  family.CheckPoint(w);
  if (family.variant() != CurveFamily::Variant::kExplicit) {
    return DiagonalPartialSum(family, z * std::conj(w), order);
  }
  const auto& c = family.coefficients();
  Complex sum = 0.0;
  for (Eigen::Index j = 0; j < c.rows() && j <= order; ++j) {
    const Eigen::VectorXcd row = c.row(j).transpose();
    const std::span<const Complex> p(row.data(),
                                     static_cast<std::size_t>(row.size()));
    sum += EvaluatePolynomial(p, z).value *
           std::conj(EvaluatePolynomial(p, w).value);
  }
  return sum;
}

int TruncationOrder(const CurveFamily& family, const Domain& domain,
                    const TruncationPolicy& policy) {
  if (!(policy.epsilon > 0.0)) {
    throw InvalidArgument("truncation.epsilon must be positive");
  }
  if (policy.max_order < 1) {
    throw InvalidArgument("truncation.max_order must be positive");
  }
  switch (family.variant()) {
    case CurveFamily::Variant::kKostlan:
      return family.kostlan_degree();
    case CurveFamily::Variant::kExplicit:
      return static_cast<int>(family.coefficients().cols()) - 1;
    default:
      break;
  }
  const double r = domain.MaxModulus();
  const double r0 = domain.MinModulus();
  const double eps2 = policy.epsilon * policy.epsilon;
  if (family.variant() == CurveFamily::Variant::kHyperbolic && r >= 1.0) {
    throw InvalidArgument(
        "truncation policy unreachable: hyperbolic domain reaches |z| = 1");
  }
  for (int n = 0; n <= policy.max_order; ++n) {
    double tail = 0.0;
    double partial = 0.0;
    if (family.variant() == CurveFamily::Variant::kPlanar) {
      tail = PlanarTail(r, n);
      partial = DiagonalPartialSum(family, r0 * r0, n).real();
    } else {
      const double q = r * r;
      const double q0 = r0 * r0;
      tail = std::pow(q, n + 1) / (1.0 - q);
      partial = (1.0 - std::pow(q0, n + 1)) / (1.0 - q0);
    }
    if (tail <= eps2 * partial) return n;
  }
  throw InvalidArgument("truncation policy unreachable within max_order = " +
                        std::to_string(policy.max_order));
}

Ensemble::Ensemble(CurveFamily family, Domain domain, TruncationPolicy policy)
    : family_(std::move(family)), domain_(domain), policy_(policy) {
  if (!family_.domain().ContainsDomain(domain_)) {
    throw OutsideDomain("ensemble domain " + domain_.ToString() +
                        " is not inside the " + family_.Name() + " domain " +
                        family_.domain().ToString());
  }
  order_ = TruncationOrder(family_, domain_, policy_);
  if (family_.variant() == CurveFamily::Variant::kExplicit) return;
  if (!family_.IsFinite()) evaluation_scale_ = domain_.MaxModulus();
  const double log_scale = std::log(evaluation_scale_);
  scaled_basis_.resize(static_cast<std::size_t>(order_) + 1);
  for (int j = 0; j <= order_; ++j) {
    scaled_basis_[static_cast<std::size_t>(j)] =
        std::exp(family_.LogBasisScale(j) + j * log_scale);
  }
}

int Ensemble::NumCoefficients() const {
  if (family_.variant() == CurveFamily::Variant::kExplicit) {
    return static_cast<int>(family_.coefficients().rows());
  }
  return order_ + 1;
}

int Ensemble::PolynomialDegree() const {
  if (family_.variant() == CurveFamily::Variant::kExplicit) {
    return static_cast<int>(family_.coefficients().cols()) - 1;
  }
  return order_;
}

std::vector<Complex> Ensemble::ScaledPolynomial(
    std::span<const Complex> omega) const {
  if (static_cast<int>(omega.size()) != NumCoefficients()) {
    throw InvalidArgument("coefficient vector has length " +
                          std::to_string(omega.size()) + ", expected " +
                          std::to_string(NumCoefficients()));
  }
  if (family_.variant() != CurveFamily::Variant::kExplicit) {
    std::vector<Complex> b(omega.size());
    for (std::size_t j = 0; j < omega.size(); ++j) {
      b[j] = omega[j] * scaled_basis_[j];
    }
    return b;
  }
  const auto& c = family_.coefficients();
  std::vector<Complex> b(static_cast<std::size_t>(c.cols()), Complex(0.0));
  for (Eigen::Index j = 0; j < c.rows(); ++j) {
    for (Eigen::Index k = 0; k < c.cols(); ++k) {
      b[static_cast<std::size_t>(k)] +=
          omega[static_cast<std::size_t>(j)] * c(j, k);
    }
  }
  return b;
}

}  // namespace gafzeros
