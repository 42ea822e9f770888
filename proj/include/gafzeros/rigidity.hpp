#ifndef GAFZEROS_RIGIDITY_HPP_
#define GAFZEROS_RIGIDITY_HPP_

#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gafzeros/domain.hpp"
#include "gafzeros/ensembles.hpp"

namespace gafzeros {

// Finite curve Psi(z) = g(z) C (1, z, ..., z^d)^T with g = exp(q) for a
// polynomial q (ascending coefficients; empty means g = 1). Closed under
// Psi -> g U Psi, which keeps every construction exact.
class KernelModel {
 public:
  // Rows of `coeffs` must be linearly independent.
  explicit KernelModel(Eigen::MatrixXcd coeffs,
                       std::vector<Complex> log_multiplier = {});
  static KernelModel FromFamily(const CurveFamily& explicit_family);

  int Dimension() const { return static_cast<int>(coeffs_.rows()); }
  const Eigen::MatrixXcd& coefficients() const { return coeffs_; }
  const std::vector<Complex>& log_multiplier() const { return log_multiplier_; }

  Complex Multiplier(Complex z) const;
  Eigen::VectorXcd Psi(Complex z) const;
  // K(z, w) = sum_j psi_j(z) conj(psi_j(w)).
  Complex Kernel(Complex z, Complex w) const;
  // log K(z, z), without forming |g|^2.
  double LogDiagonal(Complex z) const;

 private:
  Eigen::MatrixXcd coeffs_;
  std::vector<Complex> log_multiplier_;
};

// Haar-random unitary from the QR factorization of a complex Gaussian
// matrix with the phases of R's diagonal folded back into Q.
Eigen::MatrixXcd RandomUnitary(int n, std::mt19937_64& rng);

// The model exp(extra) * U * Psi.
KernelModel MakeEquivalent(const KernelModel& model, const Eigen::MatrixXcd& u,
                           const std::vector<Complex>& extra_log_multiplier);

// sum_k radius * sqrt(k/count) e^{i k golden angle}: well spread points.
std::vector<Complex> SunflowerPoints(int count, double radius,
                                     Complex center = {0.0, 0.0});

// Points of a W x H grid filling `region` (cell centers).
std::vector<Complex> GridPoints(const Domain& region, int width, int height);

struct PolarizationOptions {
  // Outer radius of the circle stencil around the center.
  double radius = 0.25;
  int angles = 64;
  // Extra radii beyond the number of unknowns per Fourier mode.
  int extra_radii = 6;
  double max_condition = 1e12;
};

struct PolarizationTable {
  Complex center;
  int order = 0;
  int requested_order = 0;
  // c(m, n) multiplies (z - center)^m conj(w - center)^n.
  Eigen::MatrixXcd coefficients;
  double condition = 0.0;
  // Non-empty when the order had to be reduced.
  std::string notice;

  Complex Evaluate(Complex z, Complex w) const;
};

// Taylor coefficients of the polarization K(z, w) of a real-analytic
// diagonal lambda -> K(lambda, lambda), from values on a polar stencil:
// the angular DFT on each circle separates m - n, and a least-squares fit
// in rho^2 separates the rest. Order must be in [0, 8].
PolarizationTable Polarize(const std::function<double(Complex)>& diagonal,
                           Complex center, int order,
                           const PolarizationOptions& options = {});

inline constexpr double kHarmonicTolerance = 1e-6;

struct RieszReport {
  std::vector<Complex> points;
  // Laplacian of log K1(z, z) - log K2(z, z) at each point.
  std::vector<double> laplacian;
  double max_abs_laplacian = 0.0;
  bool same_measure = false;
  double step = 0.0;
};

// Throws InvalidArgument if either kernel vanishes (or is not finite) on
// a stencil point.
RieszReport RieszCompare(const KernelModel& first, const KernelModel& second,
                         const std::vector<Complex>& points, double h = 1e-3);

inline constexpr double kCertificateTolerance = 1e-8;

struct EquivalenceCertificate {
  Eigen::MatrixXcd u;
  std::vector<Complex> points;
  std::vector<Complex> g_values;
  double residual = 0.0;
  double unitarity_defect = 0.0;

  bool Valid() const {
    return residual <= kCertificateTolerance &&
           unitarity_defect <= kCertificateTolerance;
  }
};

// Recovers g and U with Psi2 = g U Psi1 on the sample points, in the gauge
// arg g(points[0]) = 0. Requires equal dimensions, at least 2N points and
// a rank-N evaluation matrix for the first model.
EquivalenceCertificate RecoverEquivalence(const KernelModel& first,
                                          const KernelModel& second,
                                          const std::vector<Complex>& points);

}  // namespace gafzeros

#endif  // GAFZEROS_RIGIDITY_HPP_
