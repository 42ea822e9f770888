#include "gafzeros/rigidity.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "gafzeros/numeric.hpp"

namespace gafzeros {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXcd Monomials(Complex z, int degree) {
  Eigen::VectorXcd v(degree + 1);
  Complex p = 1.0;
  for (int k = 0; k <= degree; ++k) {
    v(k) = p;
    p *= z;
  }
  return v;
}

Complex Horner(const std::vector<Complex>& coeffs, Complex z) {
  Complex value = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) value = value * z + *it;
  return value;
}

double OperatorNorm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

Complex Unit(Complex c) { return c / std::abs(c); }

}  // namespace

KernelModel::KernelModel(Eigen::MatrixXcd coeffs,
                         std::vector<Complex> log_multiplier)
    : coeffs_(std::move(coeffs)), log_multiplier_(std::move(log_multiplier)) {
  if (coeffs_.rows() == 0 || coeffs_.cols() == 0) {
    throw InvalidArgument("model.coefficients must be non-empty");
  }
  if (coeffs_.rows() > 64) {
    throw InvalidArgument("model.coefficients: at most 64 components");
  }
  if (!coeffs_.allFinite()) {
    throw InvalidArgument("model.coefficients must be finite");
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(coeffs_);
  lu.setThreshold(1e-10);
  if (lu.rank() < coeffs_.rows()) {
    throw InvalidArgument(
        "model.coefficients: components are not linearly independent");
  }
}

KernelModel KernelModel::FromFamily(const CurveFamily& explicit_family) {
  if (explicit_family.variant() != CurveFamily::Variant::kExplicit) {
    throw InvalidArgument("kernel models need an explicit family");
  }
  return KernelModel(explicit_family.coefficients());
}

Complex KernelModel::Multiplier(Complex z) const {
  return std::exp(Horner(log_multiplier_, z));
}

Eigen::VectorXcd KernelModel::Psi(Complex z) const {
  return Multiplier(z) *
         (coeffs_ * Monomials(z, static_cast<int>(coeffs_.cols()) - 1));
}

Complex KernelModel::Kernel(Complex z, Complex w) const {
  return Psi(w).dot(Psi(z));
}

double KernelModel::LogDiagonal(Complex z) const {
  const Eigen::VectorXcd v =
      coeffs_ * Monomials(z, static_cast<int>(coeffs_.cols()) - 1);
  return std::log(v.squaredNorm()) + 2.0 * Horner(log_multiplier_, z).real();
}

Eigen::MatrixXcd RandomUnitary(int n, std::mt19937_64& rng) {
  if (n < 1) throw InvalidArgument("unitary size must be positive");
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = {re, im};
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR();
  for (int j = 0; j < n; ++j) q.col(j) *= Unit(r(j, j));
  return q;
}

KernelModel MakeEquivalent(const KernelModel& model, const Eigen::MatrixXcd& u,
                           const std::vector<Complex>& extra_log_multiplier) {
  if (u.rows() != model.Dimension() || u.cols() != model.Dimension()) {
    throw InvalidArgument("U must be N x N for a model of dimension N");
  }
  std::vector<Complex> q = model.log_multiplier();
  if (q.size() < extra_log_multiplier.size()) q.resize(extra_log_multiplier.size());
  for (std::size_t k = 0; k < extra_log_multiplier.size(); ++k) {
    q[k] += extra_log_multiplier[k];
  }
  return KernelModel(u * model.coefficients(), q);
}

std::vector<Complex> SunflowerPoints(int count, double radius, Complex center) {
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<Complex> points;
  for (int k = 0; k < count; ++k) {
    points.push_back(center + std::polar(radius * std::sqrt((k + 0.5) / count),
                                         golden * k));
  }
  return points;
}

std::vector<Complex> GridPoints(const Domain& region, int width, int height) {
  if (width < 1 || height < 1) throw InvalidArgument("grid must be at least 1x1");
  Complex lo;
  Complex hi;
  if (region.IsDisk()) {
    const Complex half(region.radius() / std::sqrt(2.0),
                       region.radius() / std::sqrt(2.0));
    lo = region.center() - half;
    hi = region.center() + half;
  } else {
    lo = region.lower();
    hi = region.upper();
  }
  std::vector<Complex> points;
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      points.emplace_back(lo.real() + (i + 0.5) * (hi.real() - lo.real()) / width,
                          lo.imag() + (j + 0.5) * (hi.imag() - lo.imag()) / height);
    }
  }
  return points;
}

Complex PolarizationTable::Evaluate(Complex z, Complex w) const {
  const Complex dz = z - center;
  const Complex dw = std::conj(w - center);
  Complex total = 0.0;
  Complex pm = 1.0;
  for (int m = 0; m <= order; ++m) {
    Complex pn = 1.0;
    for (int n = 0; n <= order; ++n) {
      total += coefficients(m, n) * pm * pn;
      pn *= dw;
    }
    pm *= dz;
  }
  return total;
}

PolarizationTable Polarize(const std::function<double(Complex)>& diagonal,
                           Complex center, int order,
                           const PolarizationOptions& options) {
  if (order < 0 || order > 8) throw InvalidArgument("order must be in [0, 8]");
  if (!(options.radius > 0.0)) throw InvalidArgument("stencil radius must be positive");
  if (options.angles < 2 * order + 2) {
    throw InvalidArgument("stencil needs at least 2 * order + 2 angles");
  }
  PolarizationTable table;
  table.center = center;
  table.requested_order = order;

  int used = order;
  const int count = order + 1 + std::max(options.extra_radii, 0);
  Eigen::VectorXd t(count);
  Eigen::VectorXd rho(count);
  for (int p = 0; p < count; ++p) {
    const double x = 0.5 * (1.0 + std::cos(kPi * (2.0 * p + 1.0) / (2.0 * count)));
    rho(p) = options.radius * x;
    t(p) = x * x;
  }
  auto vandermonde = [&](int columns) {
    Eigen::MatrixXd v(count, columns);
    for (int p = 0; p < count; ++p) {
      double power = 1.0;
      for (int n = 0; n < columns; ++n) {
        v(p, n) = power;
        power *= t(p);
      }
    }
    return v;
  };
  for (;; --used) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(vandermonde(used + 1));
    const auto& s = svd.singularValues();
    table.condition = s(0) / s(s.size() - 1);
    if (table.condition <= options.max_condition || used == 0) break;
  }
  if (used < order) {
    table.notice = "order reduced from " + std::to_string(order) + " to " +
                   std::to_string(used) + " (stencil condition " +
                   std::to_string(table.condition) + ")";
  }
  table.order = used;

  // Angular DFT on each circle: modes[k + used](p) = f_k(rho_p).
  const int q = options.angles;
  Eigen::MatrixXcd modes = Eigen::MatrixXcd::Zero(2 * used + 1, count);
  for (int p = 0; p < count; ++p) {
    for (int a = 0; a < q; ++a) {
      const double theta = 2.0 * kPi * a / q;
      const double value = diagonal(center + std::polar(rho(p), theta));
      if (!std::isfinite(value)) {
        throw InvalidArgument("diagonal is not finite on the stencil");
      }
      for (int k = -used; k <= used; ++k) {
        modes(k + used, p) += value * std::polar(1.0 / q, -k * theta);
      }
    }
  }

  table.coefficients = Eigen::MatrixXcd::Zero(used + 1, used + 1);
  for (int k = -used; k <= used; ++k) {
    const int shift = std::abs(k);
    const int columns = used - shift + 1;
    // f_k(rho) = sum_n c(n + k, n) rho^{2n + k}; fitting in x = rho / radius
    // without dividing by x^k keeps the small circles from amplifying noise.
    Eigen::MatrixXcd v(count, columns);
    for (int p = 0; p < count; ++p) {
      const double x = rho(p) / options.radius;
      for (int n = 0; n < columns; ++n) v(p, n) = std::pow(x, 2 * n + shift);
    }
    const Eigen::VectorXcd rhs = modes.row(k + used).transpose();
    const Eigen::VectorXcd a = v.colPivHouseholderQr().solve(rhs);
    for (int n = 0; n < columns; ++n) {
      const Complex c = a(n) / std::pow(options.radius, 2 * n + shift);
      if (k >= 0) {
        table.coefficients(n + k, n) = c;
      } else {
        table.coefficients(n, n + shift) = c;
      }
    }
  }
  return table;
}

RieszReport RieszCompare(const KernelModel& first, const KernelModel& second,
                         const std::vector<Complex>& points, double h) {
  if (!(h > 0.0)) throw InvalidArgument("h must be positive");
  RieszReport report;
  report.points = points;
  report.step = h;
  const auto difference = [&](Complex z) {
    const double a = first.LogDiagonal(z);
    const double b = second.LogDiagonal(z);
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw InvalidArgument("kernel vanishes near grid point " +
                            std::to_string(z.real()) + "," +
                            std::to_string(z.imag()));
    }
    return a - b;
  };
  for (const Complex z : points) {
    const double lap = RichardsonLaplacian(difference, z, h);
    report.laplacian.push_back(lap);
    report.max_abs_laplacian = std::max(report.max_abs_laplacian, std::abs(lap));
  }
  report.same_measure = report.max_abs_laplacian <= kHarmonicTolerance;
  return report;
}

EquivalenceCertificate RecoverEquivalence(const KernelModel& first,
                                          const KernelModel& second,
                                          const std::vector<Complex>& points) {
  const int n = first.Dimension();
  if (second.Dimension() != n) {
    throw InvalidArgument(
        "dimension mismatch: equivalent curves have the same dimension (" +
        std::to_string(n) + " vs " + std::to_string(second.Dimension()) + ")");
  }
  const int m = static_cast<int>(points.size());
  if (m < 2 * n) {
    throw InvalidArgument("need at least 2N = " + std::to_string(2 * n) +
                          " sample points");
  }
  Eigen::MatrixXcd a1(m, n);
  Eigen::MatrixXcd a2(m, n);
  for (int i = 0; i < m; ++i) {
    a1.row(i) = first.Psi(points[i]).transpose();
    a2.row(i) = second.Psi(points[i]).transpose();
  }
  if (!a1.allFinite() || !a2.allFinite()) {
    throw InvalidArgument("curve values overflow at the sample points");
  }
  {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a1);
    const auto& s = svd.singularValues();
    if (!(s(n - 1) > 1e-13 * s(0))) {
      throw InvalidArgument(
          "evaluation matrix of the first model is rank-deficient at the "
          "sample points");
    }
  }
  const Eigen::MatrixXcd k1 = a1 * a1.adjoint();
  const Eigen::MatrixXcd k2 = a2 * a2.adjoint();

  // |g| from the diagonals; phases propagated along the strongest kernel
  // links, starting from arg g(points[0]) = 0.
  std::vector<Complex> g(m);
  std::vector<bool> known(m, false);
  std::vector<double> link(m, -1.0);
  std::vector<int> parent(m, 0);
  auto modulus = [&](int i) {
    return std::sqrt(k2(i, i).real() / k1(i, i).real());
  };
  auto strength = [&](int i, int j) {
    return std::abs(k1(i, j)) / std::sqrt(k1(i, i).real() * k1(j, j).real());
  };
  g[0] = modulus(0);
  known[0] = true;
  for (int i = 1; i < m; ++i) link[i] = strength(i, 0);
  for (int step = 1; step < m; ++step) {
    int next = -1;
    for (int i = 0; i < m; ++i) {
      if (!known[i] && (next < 0 || link[i] > link[next])) next = i;
    }
    const int j = parent[next];
    const Complex ratio = k2(next, j) / (k1(next, j) * std::conj(g[j]));
    g[next] = modulus(next) * Unit(ratio);
    known[next] = true;
    for (int i = 0; i < m; ++i) {
      if (!known[i] && strength(i, next) > link[i]) {
        link[i] = strength(i, next);
        parent[i] = next;
      }
    }
  }

  const auto qr = a1.colPivHouseholderQr();
  auto solve_u = [&] {
    Eigen::MatrixXcd b = a2;
    for (int i = 0; i < m; ++i) b.row(i) /= g[i];
    return Eigen::MatrixXcd(qr.solve(b).transpose());
  };
  Eigen::MatrixXcd u = solve_u();
  // One refinement pass for the phases, then re-fix the gauge.
  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXcd y = u * a1.row(i).transpose();
    g[i] = y.dot(a2.row(i).transpose()) / y.squaredNorm();
  }
  const Complex gauge = Unit(g[0]);
  for (auto& value : g) value /= gauge;
  u = solve_u();

  EquivalenceCertificate cert;
  cert.u = u;
  cert.points = points;
  cert.g_values = g;
  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXcd target = a2.row(i).transpose();
    const Eigen::VectorXcd fitted = g[i] * (u * a1.row(i).transpose());
    cert.residual = std::max(cert.residual, (target - fitted).norm() / target.norm());
  }
  cert.unitarity_defect =
      OperatorNorm(u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n));
  return cert;
}

}  // namespace gafzeros
