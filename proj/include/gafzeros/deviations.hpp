#ifndef GAFZEROS_DEVIATIONS_HPP_
#define GAFZEROS_DEVIATIONS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "gafzeros/bump.hpp"
#include "gafzeros/ensembles.hpp"
#include "gafzeros/numeric.hpp"
#include "gafzeros/sampling.hpp"

namespace gafzeros {

// Constant in |int_E log|Z| dnu - nu(E) log sigma| <= nu(E) [log(1/nu(E)) + c]
// for a complex Gaussian Z with E|Z|^2 = sigma^2. The value 1/4 fails for E
// close to the whole space (E log|Z| = -gamma/2 when sigma = 1); the sharp
// constant is sup_s [-(1/nu) int_{|Z|<=s} log|Z| dnu - log(1/nu)] = 0.290364...,
// attained near nu = 0.981. Rounded up.
inline constexpr double kLemmaConstant = 0.29037;
inline constexpr double kQuarter = 0.25;

// Event for a single complex Gaussian: s_lower < |Z| <= s_upper (s_upper may
// be infinite) intersected with the angular sector arg Z in
// [angle_start, angle_start + angle_width).
struct LemmaEvent {
  double s_lower = 0.0;
  double s_upper = 0.0;
  double angle_start = 0.0;
  double angle_width = 0.0;

  static LemmaEvent Sublevel(double s);
  static LemmaEvent Superlevel(double s);
  // {Re(Z e^{-i theta}) > 0}.
  static LemmaEvent HalfPlane(double theta);
  static LemmaEvent Sector(double s_lower, double s_upper, double angle_start,
                           double angle_width);
  // {|Z| <= s} with nu(E) = mass for variance sigma^2.
  static LemmaEvent SublevelWithMass(double mass, double sigma);

  std::string ToString() const;
};

struct LemmaReport {
  double sigma = 1.0;
  LemmaEvent event;
  double nu = 0.0;
  double integral = 0.0;  // int_E log|Z| dnu
  double lhs = 0.0;       // |integral - nu log sigma|
  double rhs = 0.0;       // nu [log(1/nu) + kLemmaConstant]
  double rhs_quarter = 0.0;
  bool holds = false;
  bool holds_quarter = false;
};

// Throws InvalidArgument for sigma <= 0 or nu(E) = 0.
LemmaReport LemmaCheck(double sigma, const LemmaEvent& event);

// Pr(|log|psi(z)| - log||Psi(z)||| > lambda) for a Gaussian sample; psi/||Psi||
// is a standard complex Gaussian, so this is
// exp(-e^{2 lambda}) + 1 - exp(-e^{-2 lambda}).
double PointwiseExactProbability(double lambda);
double PointwiseBound(double lambda);

struct PointwiseReport {
  double lambda = 0.0;
  double exact = 0.0;
  double bound = 0.0;
  std::int64_t trials = 0;
  std::int64_t exceed = 0;
  double empirical = 0.0;
  Interval ci;
};

// Closed form plus a Monte Carlo estimate at z (trials = 0 skips it).
PointwiseReport PointwiseConcentration(const CurveFamily& family, Complex z,
                                       double lambda, std::int64_t trials,
                                       std::uint64_t seed, int workers = 1);

struct MonteCarloOptions {
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
  CoefficientLaw law = CoefficientLaw::Gaussian();
  TruncationPolicy policy;
};

// A trial whose zeros could not be resolved was redrawn from a fresh
// stream. Never silently dropped.
struct Resample {
  std::int64_t trial = 0;
  int attempts = 0;
  std::string reason;
};

inline constexpr int kMaxResamples = 3;

// 3 exp(-2 pi lambda / ||Laplacian phi||_1).
double TailBound(double lambda, double laplacian_l1);
// exp(-2 pi lambda / ||Laplacian phi||_1 + kLemmaConstant), for one sign.
double OneSidedTailBound(double lambda, double laplacian_l1);

struct TailEstimate {
  double lambda = 0.0;
  std::int64_t exceed = 0;
  std::int64_t trials = 0;
  double empirical_prob = 0.0;
  Interval ci;
  double bound = 0.0;
  double one_sided_bound = 0.0;
  std::int64_t exceed_plus = 0;
  std::int64_t exceed_minus = 0;
  bool violated = false;  // ci.lower > bound
};

struct TailReport {
  double mu_phi = 0.0;  // int phi dmu
  double laplacian_l1 = 0.0;
  std::vector<TailEstimate> estimates;
  // Per-trial deviations int phi (dn - dmu), in trial order.
  std::vector<double> deviations;
  std::int64_t jitter_retries = 0;
  std::vector<Resample> resamples;
  int truncation_order = 0;

  bool AnyViolated() const;
};

// Requires trials >= 1000 and supp phi inside the family domain.
TailReport OffordTail(const CurveFamily& family, const TestFunction& phi,
                      const std::vector<double>& lambdas,
                      const MonteCarloOptions& options);

struct HoleEstimate {
  double radius = 0.0;
  std::int64_t holes = 0;
  std::int64_t trials = 0;
  double empirical = 0.0;
  Interval ci;
  double bound = 0.0;         // min over the scan
  double best_inner = 0.0;    // minimizing r
  double mu_inner = 0.0;      // mu(D_r) there
  double laplacian_l1 = 0.0;  // of bump(r, R) there
  bool violated = false;      // ci.lower > bound
};

struct HoleReport {
  std::vector<HoleEstimate> estimates;
  std::int64_t jitter_retries = 0;
  std::vector<Resample> resamples;
  int truncation_order = 0;
  int scan_points = 0;

  bool AnyViolated() const;
};

// min over r in the scan of 3 exp(-2 pi mu(D_r) / ||Laplacian bump(r, R)||_1),
// disks centered at 0.
HoleEstimate HoleBound(const CurveFamily& family, double radius,
                       int scan_points = 199);

// One draw per trial; every radius is counted on the same sample.
HoleReport HoleProbability(const CurveFamily& family,
                           const std::vector<double>& radii,
                           const MonteCarloOptions& options,
                           int scan_points = 199);

// C = sup_{0<r<1} (1 - r) ||Laplacian bump(r, 1)||_1 / (2 pi). With this C,
// hole probability p on the unit disk gives
// mu(D_r) <= C log(3/p) / (1 - r).
double DimensionlessConstant();
// Throws InvalidArgument unless 0 < p <= 1 and 0 < r < 1.
double DimensionlessDiskBound(double p, double r);

// Real polynomial in one or two variables: sum coef * x^px * y^py.
struct RealPolynomial {
  struct Term {
    double coef = 0.0;
    int px = 0;
    int py = 0;
  };
  int variables = 1;
  std::vector<Term> terms;

  int Degree() const;
  double operator()(double x, double y) const;
};

struct PolyEvent {
  enum class Kind { kSublevel, kSuperlevel, kBox };
  Kind kind = Kind::kBox;
  double level = 0.0;  // |P| <= level or |P| > level
  double lower[2] = {0.0, 0.0};
  double upper[2] = {0.0, 0.0};

  bool Contains(const RealPolynomial& p, double x, double y) const;
  std::string ToString() const;
};

struct PolyLemmaReport {
  int degree = 0;
  std::int64_t trials = 0;
  std::int64_t in_event = 0;
  double nu = 0.0;
  double mean_event = 0.0;  // (1/nu(E)) int_E log|P| dnu
  double mean_all = 0.0;    // int log|P| dnu
  double difference = 0.0;
  // Solves |difference| = 2 d log(C / nu(E)); NaN when d = 0.
  double c_empirical = 0.0;
  bool finite = false;
};

// Monte Carlo under the standard Gaussian on R^n. Refuses (InvalidArgument)
// when fewer than 10 points land in E.
PolyLemmaReport PolynomialLemmaCheck(const RealPolynomial& p, int degree,
                                     const PolyEvent& event,
                                     std::int64_t trials, std::uint64_t seed,
                                     int workers = 1);

}  // namespace gafzeros

#endif  // GAFZEROS_DEVIATIONS_HPP_
