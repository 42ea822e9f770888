#include "gafzeros/deviations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>

#include "gafzeros/intensity.hpp"
#include "gafzeros/zeros.hpp"

namespace gafzeros {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// int_a^b log(u) 2u e^{-u^2} du, the sigma = 1 radial integral.
double RadialLogIntegral(double a, double b) {
  const auto f = [](double u) {
    return u > 0.0 ? std::log(u) * 2.0 * u * std::exp(-u * u) : 0.0;
  };
  double total = 0.0;
  boost::math::quadrature::tanh_sinh<double> finite;
  if (a < std::min(b, 1.0)) total += finite.integrate(f, a, std::min(b, 1.0));
  const double lo = std::max(a, 1.0);
  if (b > lo) {
    if (std::isinf(b)) {
      boost::math::quadrature::exp_sinh<double> tail;
      total += tail.integrate([&](double u) { return f(u); }, lo, kInf);
    } else {
      total += finite.integrate(f, lo, b);
    }
  }
  return total;
}

// Stream for the k-th redraw of a trial whose zeros could not be resolved.
std::uint64_t ResampleSeed(std::uint64_t seed, int attempt) {
  if (attempt == 0) return seed;
  return TrialStreamSeed(seed ^ 0xD1B54A32D192ED03ULL,
                         static_cast<std::uint64_t>(attempt));
}

template <typename Body>
auto WithResamples(std::int64_t trial, std::uint64_t seed, Body body,
                   Resample& log) {
  std::string reason;
  for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
    try {
      auto result = body(ResampleSeed(seed, attempt));
      if (attempt > 0) log = {trial, attempt, reason};
      return result;
    } catch (const ConvergenceError& e) {
      reason = e.what();
    } catch (const BoundaryZeroError& e) {
      reason = e.what();
    }
  }
  throw ConvergenceError("trial " + std::to_string(trial) +
                         " failed after " + std::to_string(kMaxResamples) +
                         " redraws: " + reason);
}

void CheckMonteCarlo(const MonteCarloOptions& options, std::int64_t minimum) {
  if (options.trials < minimum) {
    throw InvalidArgument("trials must be at least " + std::to_string(minimum));
  }
  if (options.workers < 1) throw InvalidArgument("workers must be positive");
}

}  // namespace

LemmaEvent LemmaEvent::Sublevel(double s) {
  if (!(s > 0.0)) throw InvalidArgument("event.s must be positive");
  return {0.0, s, 0.0, 2.0 * kPi};
}

LemmaEvent LemmaEvent::Superlevel(double s) {
  if (!(s >= 0.0)) throw InvalidArgument("event.s must be nonnegative");
  return {s, kInf, 0.0, 2.0 * kPi};
}

LemmaEvent LemmaEvent::HalfPlane(double theta) {
  return {0.0, kInf, theta - 0.5 * kPi, kPi};
}

LemmaEvent LemmaEvent::Sector(double s_lower, double s_upper,
                              double angle_start, double angle_width) {
  if (!(s_lower >= 0.0) || !(s_upper > s_lower)) {
    throw InvalidArgument("event radii must satisfy 0 <= s_lower < s_upper");
  }
  if (!(angle_width > 0.0) || angle_width > 2.0 * kPi) {
    throw InvalidArgument("event.angle_width must be in (0, 2 pi]");
  }
  return {s_lower, s_upper, angle_start, angle_width};
}

LemmaEvent LemmaEvent::SublevelWithMass(double mass, double sigma) {
  if (!(mass > 0.0) || !(mass < 1.0)) {
    throw InvalidArgument("event.mass must be in (0, 1)");
  }
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  return Sublevel(sigma * std::sqrt(-std::log1p(-mass)));
}

std::string LemmaEvent::ToString() const {
  std::ostringstream out;
  out.precision(17);
  out << s_lower << " < |Z| <= " << s_upper << ", arg in [" << angle_start
      << ", " << angle_start + angle_width << ")";
  return out.str();
}

LemmaReport LemmaCheck(double sigma, const LemmaEvent& event) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  const double a = event.s_lower / sigma;
  const double b = event.s_upper / sigma;
  const double fraction = std::min(event.angle_width / (2.0 * kPi), 1.0);
  const double radial_mass = std::exp(-a * a) - std::exp(-b * b);
  LemmaReport report;
  report.sigma = sigma;
  report.event = event;
  report.nu = fraction * radial_mass;
  if (!(report.nu > 0.0)) throw InvalidArgument("event has nu(E) = 0");
  const double centered = fraction * RadialLogIntegral(a, b);
  report.integral = centered + report.nu * std::log(sigma);
  report.lhs = std::abs(centered);
  const double log_inverse = -std::log(report.nu);
  report.rhs = report.nu * (log_inverse + kLemmaConstant);
  report.rhs_quarter = report.nu * (log_inverse + kQuarter);
  report.holds = report.lhs <= report.rhs;
  report.holds_quarter = report.lhs <= report.rhs_quarter;
  return report;
}

double PointwiseExactProbability(double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  // Pr(|Z| > e^lambda) + Pr(|Z| < e^-lambda) with Pr(|Z| <= s) = 1 - e^{-s^2}.
  return std::exp(-std::exp(2.0 * lambda)) - std::expm1(-std::exp(-2.0 * lambda));
}

double PointwiseBound(double lambda) { return 3.0 * std::exp(-lambda); }

PointwiseReport PointwiseConcentration(const CurveFamily& family, Complex z,
                                       double lambda, std::int64_t trials,
                                       std::uint64_t seed, int workers) {
  PointwiseReport report;
  report.lambda = lambda;
  report.exact = PointwiseExactProbability(lambda);
  report.bound = PointwiseBound(lambda);
  if (trials <= 0) return report;
  family.CheckPoint(z);
  double radius = 1e-3 * std::max(1.0, std::abs(z));
  if (family.variant() == CurveFamily::Variant::kHyperbolic) {
    radius = std::min(radius, 0.5 * (1.0 - std::abs(z)));
  }
  const auto ensemble =
      std::make_shared<const Ensemble>(family, Domain::Disk(z, radius));
  const double log_norm = 0.5 * LogSquaredNorm(family, z);
  const auto law = CoefficientLaw::Gaussian();
  const auto hits = ParallelMap(
      static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
        const auto sample = Draw(ensemble, law, seed, t);
        const double dev = std::log(std::abs(sample.Evaluate(z))) - log_norm;
        return static_cast<char>(std::abs(dev) > lambda);
      });
  report.trials = trials;
  report.exceed = std::count(hits.begin(), hits.end(), 1);
  report.empirical = static_cast<double>(report.exceed) / trials;
  report.ci = WilsonInterval(report.exceed, trials);
  return report;
}

double TailBound(double lambda, double laplacian_l1) {
  return 3.0 * std::exp(-2.0 * kPi * lambda / laplacian_l1);
}

double OneSidedTailBound(double lambda, double laplacian_l1) {
  return std::exp(-2.0 * kPi * lambda / laplacian_l1 + kLemmaConstant);
}

bool TailReport::AnyViolated() const {
  return std::any_of(estimates.begin(), estimates.end(),
                     [](const TailEstimate& e) { return e.violated; });
}

TailReport OffordTail(const CurveFamily& family, const TestFunction& phi,
                      const std::vector<double>& lambdas,
                      const MonteCarloOptions& options) {
  CheckMonteCarlo(options, 1000);
  for (double lambda : lambdas) {
    if (!(lambda >= 0.0)) throw InvalidArgument("lambdas must be nonnegative");
  }
  const Domain support = phi.Support();
  const auto ensemble =
      std::make_shared<const Ensemble>(family, support, options.policy);
  TailReport report;
  report.mu_phi = MuAgainst(family, phi);
  report.laplacian_l1 = phi.laplacian_l1();
  report.truncation_order = ensemble->order();

  struct Outcome {
    double deviation = 0.0;
    int jitter = 0;
    Resample resample;
  };
  const auto outcomes = ParallelMap(
      static_cast<std::size_t>(options.trials), options.workers,
      [&](std::size_t t) {
        Outcome out;
        const auto trial = static_cast<std::int64_t>(t);
        const ZeroSet zeros = WithResamples(
            trial, options.seed,
            [&](std::uint64_t seed) {
              return Locate(Draw(ensemble, options.law, seed, t), support);
            },
            out.resample);
        out.jitter = zeros.jitter_retries;
        out.deviation = LinearStatistic(zeros, phi) - report.mu_phi;
        return out;
      });
  for (const auto& out : outcomes) {
    report.deviations.push_back(out.deviation);
    report.jitter_retries += out.jitter;
    if (out.resample.attempts > 0) report.resamples.push_back(out.resample);
  }
  for (double lambda : lambdas) {
    TailEstimate e;
    e.lambda = lambda;
    e.trials = options.trials;
    for (double d : report.deviations) {
      if (d >= lambda) ++e.exceed_plus;
      if (d <= -lambda) ++e.exceed_minus;
      if (std::abs(d) >= lambda) ++e.exceed;
    }
    e.empirical_prob = static_cast<double>(e.exceed) / e.trials;
    e.ci = WilsonInterval(e.exceed, e.trials);
    e.bound = TailBound(lambda, report.laplacian_l1);
    e.one_sided_bound = OneSidedTailBound(lambda, report.laplacian_l1);
    e.violated = e.ci.lower > e.bound;
    report.estimates.push_back(e);
  }
  return report;
}

bool HoleReport::AnyViolated() const {
  return std::any_of(estimates.begin(), estimates.end(),
                     [](const HoleEstimate& e) { return e.violated; });
}

HoleEstimate HoleBound(const CurveFamily& family, double radius,
                       int scan_points) {
  if (!(radius > 0.0)) throw InvalidArgument("R must be positive");
  if (scan_points < 1) throw InvalidArgument("scan_points must be positive");
  HoleEstimate best;
  best.radius = radius;
  best.bound = kInf;
  for (int k = 1; k <= scan_points; ++k) {
    const double r = radius * k / (scan_points + 1);
    const double mu = MuRegion(family, Domain::Disk(0.0, r));
    const double l1 = TestFunction::Bump(r, radius).laplacian_l1();
    const double bound = 3.0 * std::exp(-2.0 * kPi * mu / l1);
    if (bound < best.bound) {
      best.bound = bound;
      best.best_inner = r;
      best.mu_inner = mu;
      best.laplacian_l1 = l1;
    }
  }
  return best;
}

HoleReport HoleProbability(const CurveFamily& family,
                           const std::vector<double>& radii,
                           const MonteCarloOptions& options, int scan_points) {
  CheckMonteCarlo(options, 1);
  if (radii.empty()) throw InvalidArgument("R grid must not be empty");
  HoleReport report;
  report.scan_points = scan_points;
  for (double r : radii) report.estimates.push_back(HoleBound(family, r, scan_points));
  const double outer = *std::max_element(radii.begin(), radii.end());
  const auto ensemble = std::make_shared<const Ensemble>(
      family, Domain::Disk(0.0, outer), options.policy);
  report.truncation_order = ensemble->order();

  struct Outcome {
    std::vector<char> hole;
    int jitter = 0;
    Resample resample;
  };
  const auto outcomes = ParallelMap(
      static_cast<std::size_t>(options.trials), options.workers,
      [&](std::size_t t) {
        Outcome out;
        out.hole = WithResamples(
            static_cast<std::int64_t>(t), options.seed,
            [&](std::uint64_t seed) {
              const auto sample = Draw(ensemble, options.law, seed, t);
              std::vector<char> hole;
              int jitter = 0;
              for (double r : radii) {
                const auto c = CountInRegionDetailed(sample, Domain::Disk(0.0, r));
                jitter += c.jitter_retries;
                hole.push_back(c.count == 0);
              }
              out.jitter = jitter;
              return hole;
            },
            out.resample);
        return out;
      });
  for (const auto& out : outcomes) {
    report.jitter_retries += out.jitter;
    if (out.resample.attempts > 0) report.resamples.push_back(out.resample);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      report.estimates[i].holes += out.hole[i];
    }
  }
  for (auto& e : report.estimates) {
    e.trials = options.trials;
    e.empirical = static_cast<double>(e.holes) / e.trials;
    e.ci = WilsonInterval(e.holes, e.trials);
    e.violated = e.ci.lower > e.bound;
  }
  return report;
}

double DimensionlessConstant() {
  static const double constant = [] {
    const auto v = [](double r) {
      return (1.0 - r) * TestFunction::Bump(r, 1.0).laplacian_l1() / (2.0 * kPi);
    };
    int best = 1;
    double best_value = 0.0;
    constexpr int kGrid = 400;
    for (int k = 1; k < kGrid; ++k) {
      const double value = v(static_cast<double>(k) / kGrid);
      if (value > best_value) {
        best_value = value;
        best = k;
      }
    }
    const auto refined = boost::math::tools::brent_find_minima(
        [&](double r) { return -v(r); },
        std::max(1e-6, (best - 1.0) / kGrid),
        std::min(1.0 - 1e-6, (best + 1.0) / kGrid), 40);
    return std::max(best_value, -refined.second);
  }();
  return constant;
}

double DimensionlessDiskBound(double p, double r) {
  if (!(p > 0.0) || p > 1.0) throw InvalidArgument("p must be in (0, 1]");
  if (!(r > 0.0) || !(r < 1.0)) throw InvalidArgument("r must be in (0, 1)");
  return DimensionlessConstant() * std::log(3.0 / p) / (1.0 - r);
}

int RealPolynomial::Degree() const {
  int degree = 0;
  for (const auto& t : terms) {
    if (t.coef != 0.0) degree = std::max(degree, t.px + t.py);
  }
  return degree;
}

double RealPolynomial::operator()(double x, double y) const {
  double total = 0.0;
  for (const auto& t : terms) {
    total += t.coef * std::pow(x, t.px) * std::pow(y, t.py);
  }
  return total;
}

bool PolyEvent::Contains(const RealPolynomial& p, double x, double y) const {
  switch (kind) {
    case Kind::kSublevel:
      return std::abs(p(x, y)) <= level;
    case Kind::kSuperlevel:
      return std::abs(p(x, y)) > level;
    case Kind::kBox:
      break;
  }
  if (x < lower[0] || x > upper[0]) return false;
  return y >= lower[1] && y <= upper[1];
}

std::string PolyEvent::ToString() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind) {
    case Kind::kSublevel:
      out << "|P| <= " << level;
      break;
    case Kind::kSuperlevel:
      out << "|P| > " << level;
      break;
    case Kind::kBox:
      out << "[" << lower[0] << ", " << upper[0] << "] x [" << lower[1] << ", "
          << upper[1] << "]";
      break;
  }
  return out.str();
}

PolyLemmaReport PolynomialLemmaCheck(const RealPolynomial& p, int degree,
                                     const PolyEvent& event,
                                     std::int64_t trials, std::uint64_t seed,
                                     int workers) {
  if (p.variables != 1 && p.variables != 2) {
    throw InvalidArgument("polynomial.variables must be 1 or 2");
  }
  bool nonzero = false;
  for (const auto& t : p.terms) {
    if (t.px < 0 || t.py < 0) throw InvalidArgument("polynomial powers must be >= 0");
    if (p.variables == 1 && t.py != 0) {
      throw InvalidArgument("polynomial in one variable has a y power");
    }
    nonzero = nonzero || t.coef != 0.0;
  }
  if (!nonzero) throw InvalidArgument("polynomial is identically zero");
  if (degree < p.Degree()) {
    throw InvalidArgument("degree is below the polynomial's degree " +
                          std::to_string(p.Degree()));
  }
  if (trials < 1) throw InvalidArgument("trials must be positive");

  constexpr std::int64_t kBlock = 8192;
  struct Sums {
    std::int64_t in_event = 0;
    double log_event = 0.0;
    double log_all = 0.0;
  };
  const auto blocks = static_cast<std::size_t>((trials + kBlock - 1) / kBlock);
  const auto partial = ParallelMap(blocks, workers, [&](std::size_t b) {
    std::mt19937_64 rng(TrialStreamSeed(seed, b));
    std::normal_distribution<double> normal(0.0, 1.0);
    Sums s;
    const std::int64_t begin = static_cast<std::int64_t>(b) * kBlock;
    const std::int64_t end = std::min(trials, begin + kBlock);
    for (std::int64_t i = begin; i < end; ++i) {
      const double x = normal(rng);
      const double y = p.variables == 2 ? normal(rng) : 0.0;
      const double value = std::log(std::abs(p(x, y)));
      s.log_all += value;
      if (event.Contains(p, x, y)) {
        ++s.in_event;
        s.log_event += value;
      }
    }
    return s;
  });
  Sums total;
  for (const auto& s : partial) {
    total.in_event += s.in_event;
    total.log_event += s.log_event;
    total.log_all += s.log_all;
  }
  if (total.in_event < 10) {
    throw InvalidArgument("nu(E) estimate below 10 / trials; conditioning on E "
                          "is unreliable");
  }
  PolyLemmaReport report;
  report.degree = degree;
  report.trials = trials;
  report.in_event = total.in_event;
  report.nu = static_cast<double>(total.in_event) / trials;
  report.mean_event = total.log_event / total.in_event;
  report.mean_all = total.log_all / trials;
  report.difference = report.mean_event - report.mean_all;
  report.c_empirical =
      degree == 0 ? std::numeric_limits<double>::quiet_NaN()
                  : report.nu * std::exp(std::abs(report.difference) / (2.0 * degree));
  report.finite = std::isfinite(report.difference);
  return report;
}

}  // namespace gafzeros
