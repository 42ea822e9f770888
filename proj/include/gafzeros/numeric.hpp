#ifndef GAFZEROS_NUMERIC_HPP_
#define GAFZEROS_NUMERIC_HPP_

// Shared numerical building blocks: polynomial evaluation and roots,
// the 5-point Laplacian used by the intensity and rigidity modules,
// Wilson intervals, fixed Gauss-Legendre rules and a deterministic
// parallel map.

#include <atomic>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "gafzeros/domain.hpp"

namespace gafzeros {

struct ValueAndDerivative {
  Complex value;
  Complex derivative;
};

// Horner evaluation of sum_k coeffs[k] * z^k and its derivative.
ValueAndDerivative EvaluatePolynomial(std::span<const Complex> coeffs,
                                      Complex z);

// sum_k |coeffs[k]| |z|^k, the natural rounding scale of a Horner sum.
double AbsolutePolynomial(std::span<const Complex> coeffs, double modulus);

// Roots of sum_k coeffs[k] z^k from the eigenvalues of the balanced
// companion matrix. Trailing (highest-order) zero coefficients must be
// stripped by the caller; an empty or constant polynomial has no roots.
std::vector<Complex> CompanionEigenvalues(std::span<const Complex> coeffs);

// Five-point Laplacian of `u` at z with step h, Richardson-extrapolated
// over h and h/2: (4 L(h/2) - L(h)) / 3.
double RichardsonLaplacian(const std::function<double(Complex)>& u, Complex z,
                           double h);

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

// Wilson score interval for `successes` out of `trials` at two-sided
// normal quantile `z` (1.959963984540054 for 95%).
Interval WilsonInterval(std::int64_t successes, std::int64_t trials,
                        double z = 1.959963984540054);

// 16-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& GaussLegendre16();

// log(n!) for n >= 0.
double LogFactorial(int n);

// Runs fn(i) for i in [0, count) on `workers` threads and returns the
// results in index order. The first exception thrown by any task is
// rethrown on the calling thread after all workers stop.
template <typename Fn>
auto ParallelMap(std::size_t count, int workers, Fn fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> results(count);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  pool.reserve(n);
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace gafzeros

#endif  // GAFZEROS_NUMERIC_HPP_
