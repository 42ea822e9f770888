#include <doctest.h>

#include "gafzeros/bump.hpp"
#include "gafzeros/domain.hpp"
#include "gafzeros/numeric.hpp"

#include <cmath>
#include <numbers>

using namespace gafzeros;

TEST_CASE("regions parse and print back") {
  for (const char* spec : {"disk:1,-2,0.5", "rect:-1,-2,3,4", "window:7"}) {
    CHECK(ParseRegion(spec).ToString() == spec);
  }
  const auto r = ParseRegion("rect:3,4,-1,-2");
  CHECK(r.lower() == Complex(-1, -2));
  CHECK(r.upper() == Complex(3, 4));
}

TEST_CASE("bad regions are rejected") {
  CHECK_THROWS_AS(ParseRegion("disk:0,0"), InvalidArgument);
  CHECK_THROWS_AS(ParseRegion("disk:0,0,-1"), InvalidArgument);
  CHECK_THROWS_AS(ParseRegion("circle:0,0,1"), InvalidArgument);
  CHECK_THROWS_AS(ParseRegion("disk:0,x,1"), InvalidArgument);
  CHECK_THROWS_AS(ParseRegion("rect:0,0,0,1"), InvalidArgument);
}

TEST_CASE("containment and moduli") {
  const auto d = Domain::Disk({1.0, 0.0}, 0.5);
  CHECK(d.Contains({1.5, 0.0}));
  CHECK_FALSE(d.Contains({1.6, 0.0}));
  CHECK(d.MaxModulus() == doctest::Approx(1.5));
  CHECK(d.MinModulus() == doctest::Approx(0.5));
  CHECK(Domain::PlaneWindow(3).ContainsDomain(Domain::Disk(0.0, 3.0)));
  CHECK_FALSE(Domain::PlaneWindow(3).ContainsDomain(Domain::Disk(0.1, 3.0)));
  CHECK(d.Dilated(2.0).radius() == doctest::Approx(1.0));
  const auto r = Domain::Rectangle({-1, -1}, {2, 1});
  CHECK(r.MinModulus() == 0.0);
  CHECK(r.MaxModulus() == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("bump profile and Laplacian norm") {
  const auto phi = TestFunction::Bump(1.0, 2.0);
  CHECK(phi(0.0) == 1.0);
  CHECK(phi(1.0) == 1.0);
  CHECK(phi(2.0) == 0.0);
  CHECK(phi({0.0, 1.5}) == doctest::Approx(0.5));
  // Derivatives against central differences of the profile.
  for (double t : {1.1, 1.37, 1.8}) {
    const double h = 1e-4;
    const double d1 = (phi.Profile(t + h) - phi.Profile(t - h)) / (2 * h);
    const double d2 =
        (phi.Profile(t + h) - 2 * phi.Profile(t) + phi.Profile(t - h)) / (h * h);
    CHECK(phi.ProfileDerivative(t) == doctest::Approx(d1).epsilon(1e-6));
    CHECK(phi.ProfileSecondDerivative(t) == doctest::Approx(d2).epsilon(1e-5));
  }
  // Dense Riemann sum of |Laplacian phi| on a grid over the support.
  const int n = 1600;
  const double h = 4.0 / n;
  double l1 = 0.0;
  double signed_total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double t = std::hypot(-2 + (i + 0.5) * h, -2 + (j + 0.5) * h);
      if (t <= 1.0 || t >= 2.0) continue;
      const double lap = phi.ProfileSecondDerivative(t) + phi.ProfileDerivative(t) / t;
      l1 += std::abs(lap) * h * h;
      signed_total += lap * h * h;
    }
  }
  CHECK(phi.laplacian_l1() == doctest::Approx(l1).epsilon(1e-3));
  CHECK(std::abs(signed_total) < 1e-3);
  CHECK(phi.triangle_bound() >= phi.laplacian_l1());
  CHECK_THROWS_AS(TestFunction::Bump(2.0, 1.0), InvalidArgument);
}

TEST_CASE("Wilson interval") {
  // Textbook value: 50 of 100 at z = 1.96.
  const auto ci = WilsonInterval(50, 100, 1.96);
  CHECK(ci.lower == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(ci.upper == doctest::Approx(0.5962).epsilon(1e-3));
  CHECK(WilsonInterval(0, 100, 1.96).lower == 0.0);
  CHECK(WilsonInterval(100, 100, 1.96).upper == 1.0);
}

TEST_CASE("Richardson Laplacian is exact on quadratics") {
  const auto u = [](Complex z) { return 3 * z.real() * z.real() - z.imag() * z.imag(); };
  CHECK(RichardsonLaplacian(u, {0.3, 0.2}, 1e-2) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("parallel map keeps order") {
  const auto v = ParallelMap(100, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
}
