#include <doctest.h>

#include "gafzeros/deviations.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <numbers>

using namespace gafzeros;

namespace {

constexpr double kEuler = std::numbers::egamma;

// int_{|Z| <= s} log|Z| dnu with E|Z|^2 = sigma^2; |Z|^2 is exponential.
double SublevelOracle(double s, double sigma) {
  const double a = s * s / (sigma * sigma);
  return 0.5 * (-std::expm1(-a) * std::log(sigma * sigma) - std::exp(-a) * std::log(a) -
                boost::math::expint(1, a) - kEuler);
}

}  // namespace

TEST_CASE("lemma integrals match the exponential-integral closed form") {
  for (double sigma : {0.5, 1.0, 5.0}) {
    for (double s : {0.01, 0.3, 1.0, 4.0}) {
      const auto r = LemmaCheck(sigma, LemmaEvent::Sublevel(s * sigma));
      CHECK(r.integral == doctest::Approx(SublevelOracle(s * sigma, sigma)).epsilon(1e-10));
      CHECK(r.nu == doctest::Approx(-std::expm1(-s * s)).epsilon(1e-12));
    }
  }
  const auto whole = LemmaCheck(1.0, LemmaEvent::Superlevel(0.0));
  CHECK(whole.integral == doctest::Approx(-0.5 * kEuler).epsilon(1e-10));
  CHECK(whole.holds);
  // The whole space needs a constant of at least Euler's constant over two.
  CHECK_FALSE(whole.holds_quarter);
  const auto half = LemmaCheck(2.0, LemmaEvent::HalfPlane(0.7));
  CHECK(half.nu == doctest::Approx(0.5));
  CHECK(half.integral == doctest::Approx(0.5 * (std::log(2.0) - 0.5 * kEuler)).epsilon(1e-10));
  const auto sector = LemmaCheck(1.0, LemmaEvent::Sector(0.5, 1.0, 0.0, std::numbers::pi / 2));
  CHECK(sector.integral ==
        doctest::Approx(0.25 * (SublevelOracle(1.0, 1.0) - SublevelOracle(0.5, 1.0))).epsilon(1e-10));
}

TEST_CASE("events of prescribed mass") {
  const auto e = LemmaEvent::SublevelWithMass(0.1, 3.0);
  const auto r = LemmaCheck(3.0, e);
  CHECK(r.nu == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(r.holds);
  CHECK_THROWS_AS(LemmaEvent::SublevelWithMass(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(LemmaCheck(-1.0, e), InvalidArgument);
  CHECK_THROWS_AS(LemmaCheck(1.0, LemmaEvent::Sublevel(0.0)), InvalidArgument);
}

TEST_CASE("pointwise concentration") {
  CHECK(PointwiseExactProbability(0.1) == doctest::Approx(0.853825).epsilon(1e-6));
  for (double lambda : {0.01, 0.1, 1.0, 5.0}) {
    CHECK(PointwiseExactProbability(lambda) <= PointwiseBound(lambda));
  }
  const auto r = PointwiseConcentration(CurveFamily::Planar(5), {0.5, 0.5}, 0.5, 20000, 7);
  CHECK(r.ci.lower <= r.exact);
  CHECK(r.exact <= r.ci.upper);
}

TEST_CASE("tail bounds and argument checks") {
  CHECK(TailBound(1.0, 2 * std::numbers::pi) == doctest::Approx(3.0 * std::exp(-1.0)));
  CHECK(OneSidedTailBound(1.0, 2 * std::numbers::pi) == doctest::Approx(std::exp(-1.0 + kLemmaConstant)));
  MonteCarloOptions small;
  small.trials = 999;
  CHECK_THROWS_AS(OffordTail(CurveFamily::Planar(5), TestFunction::Bump(1, 2), {1.0}, small), InvalidArgument);
  MonteCarloOptions options;
  options.trials = 1000;
  options.seed = 2;
  CHECK_THROWS_AS(OffordTail(CurveFamily::Hyperbolic(), TestFunction::Bump(0.5, 1.0), {1.0}, options),
                  InvalidArgument);
}

TEST_CASE("tail deviations are centered") {
  MonteCarloOptions options;
  options.trials = 1000;
  options.seed = 3;
  const auto phi = TestFunction::Bump(0.5, 1.0);
  const auto r = OffordTail(CurveFamily::Planar(4), phi, {0.5, 1.0}, options);
  double mean = 0.0;
  double second = 0.0;
  for (double d : r.deviations) {
    mean += d;
    second += d * d;
  }
  mean /= 1000;
  const double sd = std::sqrt(second / 1000 - mean * mean);
  CHECK(std::abs(mean) < 4 * sd / std::sqrt(1000.0));
  CHECK(r.estimates.size() == 2);
  CHECK(r.estimates[0].exceed >= r.estimates[1].exceed);
  CHECK(r.estimates[0].exceed == r.estimates[0].exceed_plus + r.estimates[0].exceed_minus);
  CHECK_FALSE(r.AnyViolated());
}

TEST_CASE("hole bound scans inner radii") {
  const auto b = HoleBound(CurveFamily::Hyperbolic(), 0.5);
  CHECK(b.best_inner > 0.0);
  CHECK(b.best_inner < 0.5);
  const double mu = b.best_inner * b.best_inner / (1 - b.best_inner * b.best_inner);
  CHECK(b.mu_inner == doctest::Approx(mu).epsilon(1e-12));
  CHECK(b.bound == doctest::Approx(TailBound(mu, b.laplacian_l1)).epsilon(1e-12));
  const auto again = HoleBound(CurveFamily::Hyperbolic(), 0.5, 49);
  CHECK(again.bound >= b.bound - 1e-3);
}

TEST_CASE("dimensionless constant is the supremum of the scaled norm") {
  const double c = DimensionlessConstant();
  double sup = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double r = i / 1000.0;
    sup = std::max(sup, (1 - r) * TestFunction::Bump(r, 1.0).laplacian_l1() / (2 * std::numbers::pi));
  }
  CHECK(sup <= c + 1e-9);
  CHECK(sup >= c - 0.02);
  CHECK(DimensionlessDiskBound(0.5, 0.5) == doctest::Approx(c * std::log(6.0) / 0.5));
  CHECK_THROWS_AS(DimensionlessDiskBound(0.0, 0.5), InvalidArgument);
}

TEST_CASE("polynomial lemma by Monte Carlo") {
  RealPolynomial p;
  p.terms = {{1.0, 1, 0}};
  PolyEvent e;
  e.kind = PolyEvent::Kind::kSublevel;
  e.level = 0.5;
  const auto r = PolynomialLemmaCheck(p, 1, e, 400000, 1);
  // Oracle by a midpoint rule for a standard normal X.
  const int n = 200000;
  double mass = 0.0;
  double event = 0.0;
  double all = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = -10.0 + (i + 0.5) * 20.0 / n;
    const double w = std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi) * 20.0 / n;
    all += std::log(std::abs(x)) * w;
    if (std::abs(x) <= 0.5) {
      mass += w;
      event += std::log(std::abs(x)) * w;
    }
  }
  CHECK(r.nu == doctest::Approx(mass).epsilon(0.01));
  CHECK(r.mean_all == doctest::Approx(all).epsilon(0.01));
  CHECK(r.mean_event == doctest::Approx(event / mass).epsilon(0.01));
  CHECK(r.finite);
  CHECK(r.c_empirical == doctest::Approx(r.nu * std::exp(std::abs(r.difference) / 2.0)));
  PolyEvent rare;
  rare.kind = PolyEvent::Kind::kBox;
  rare.lower[0] = 8.0;
  rare.upper[0] = 9.0;
  CHECK_THROWS_AS(PolynomialLemmaCheck(p, 1, rare, 10000, 1), InvalidArgument);
  RealPolynomial constant;
  constant.terms = {{2.0, 0, 0}};
  PolyEvent above;
  above.kind = PolyEvent::Kind::kSuperlevel;
  above.level = 1.0;
  CHECK(std::isnan(PolynomialLemmaCheck(constant, 0, above, 1000, 1).c_empirical));
}
