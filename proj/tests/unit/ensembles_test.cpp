#include <doctest.h>

#include "gafzeros/ensembles.hpp"

#include <cmath>

using namespace gafzeros;

namespace {

double Binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

TEST_CASE("closed-form norms match direct sums") {
  const Complex z(0.6, -0.3);
  const double r2 = std::norm(z);
  double planar = 0.0;
  double term = 1.0;
  for (int j = 0; j < 60; ++j) {
    planar += term;
    term *= r2 / (j + 1);
  }
  CHECK(SquaredNorm(CurveFamily::Planar(5), z) == doctest::Approx(planar).epsilon(1e-14));
  double hyper = 0.0;
  for (int j = 0; j < 400; ++j) hyper += std::pow(r2, j);
  CHECK(SquaredNorm(CurveFamily::Hyperbolic(), z) == doctest::Approx(hyper).epsilon(1e-13));
  double kostlan = 0.0;
  for (int j = 0; j <= 7; ++j) kostlan += Binomial(7, j) * std::pow(r2, j);
  CHECK(SquaredNorm(CurveFamily::Kostlan(7), z) == doctest::Approx(kostlan).epsilon(1e-14));
  CHECK(LogSquaredNorm(CurveFamily::Kostlan(7), z) ==
        doctest::Approx(std::log(kostlan)).epsilon(1e-14));
}

TEST_CASE("kernel is Hermitian and matches the truncation") {
  const auto f = CurveFamily::Planar(5);
  const Complex z(0.4, 0.1);
  const Complex w(-0.2, 0.7);
  const Complex k = Kernel(f, z, w);
  CHECK(std::abs(k - std::conj(Kernel(f, w, z))) < 1e-14);
  CHECK(std::abs(k - std::exp(z * std::conj(w))) < 1e-14);
  CHECK(std::abs(TruncatedKernel(f, z, w, 40) - k) < 1e-14);
}

TEST_CASE("truncation order meets the tail criterion") {
  const auto f = CurveFamily::Planar(10);
  const auto d = Domain::Disk(0.0, 3.0);
  const TruncationPolicy policy{1e-6, 4096};
  const int n = TruncationOrder(f, d, policy);
  // Worst point for the tail is the boundary; for the partial sum it is 0,
  // where the partial sum is 1.
  const auto tail = [](int order) {
    double total = 0.0;
    double term = 1.0;
    for (int j = 1; j < 200; ++j) {
      term *= 9.0 / j;
      if (j > order) total += term;
    }
    return total;
  };
  CHECK(tail(n) <= 1e-12);
  CHECK(tail(n - 1) > 1e-12);
  CHECK_THROWS(TruncationOrder(CurveFamily::Hyperbolic(), Domain::Disk(0.0, 1.0), policy));
}

TEST_CASE("explicit families") {
  Eigen::MatrixXcd c(2, 3);
  c << 1, 0, 1, 0, 1, 0;
  const auto f = CurveFamily::Explicit(c);
  CHECK(f.Dimension() == 2);
  CHECK_FALSE(f.HasCommonZero());
  CHECK(SquaredNorm(f, 2.0) == doctest::Approx(25.0 + 4.0));
  Eigen::MatrixXcd shared(2, 3);
  shared << 0, 1, 0, 0, 0, 1;
  CHECK(CurveFamily::Explicit(shared).HasCommonZero());
  Eigen::MatrixXcd dependent(2, 2);
  dependent << 1, 2, 2, 4;
  CHECK_THROWS_AS(CurveFamily::Explicit(dependent), InvalidArgument);
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(CurveFamily::Hyperbolic().CheckPoint(1.0), OutsideDomain);
  CHECK_THROWS_AS(Ensemble(CurveFamily::Planar(1), Domain::Disk(0.0, 2.0)), OutsideDomain);
  CHECK_THROWS_AS(CurveFamily::Kostlan(0), InvalidArgument);
}
