#ifndef GAFZEROS_SAMPLING_HPP_
#define GAFZEROS_SAMPLING_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "gafzeros/ensembles.hpp"
#include "gafzeros/numeric.hpp"

namespace gafzeros {

// Law of each coefficient omega_j. The default is the standard complex
// Gaussian (real and imaginary parts independent N(0, 1/2), so
// E|omega|^2 = 1). A rotation-invariant law is given by the quantile
// function of |omega| and sampled as quantile(U) * exp(i Theta).
class CoefficientLaw {
 public:
  using Quantile = std::function<double(double)>;

  static CoefficientLaw Gaussian();
  // Checks E|omega|^2 = 1 to 1e-3 and quantile(u) > 0 for u > 0.
  static CoefficientLaw RotationInvariant(Quantile quantile, std::string name);
  // "gaussian", "unit-circle" or "uniform-disk".
  static CoefficientLaw FromName(const std::string& name);

  bool IsGaussian() const { return !quantile_; }
  const std::string& name() const { return name_; }

  Complex Draw(std::mt19937_64& rng) const;

 private:
  CoefficientLaw() = default;

  Quantile quantile_;
  std::string name_ = "gaussian";
};

// Seed of the random stream for one trial. Depends only on the pair, so
// trials can run in any order on any number of workers.
std::uint64_t TrialStreamSeed(std::uint64_t master_seed, std::uint64_t trial);

// One realization psi(z, omega) = sum_j omega_j psi_j(z).
class GafSample {
 public:
  GafSample(std::shared_ptr<const Ensemble> ensemble,
            std::vector<Complex> coefficients, std::uint64_t master_seed = 0,
            std::uint64_t trial = 0);

  const Ensemble& ensemble() const { return *ensemble_; }
  const std::shared_ptr<const Ensemble>& ensemble_ptr() const {
    return ensemble_;
  }
  const std::vector<Complex>& coefficients() const { return coefficients_; }
  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t trial() const { return trial_; }

  Complex Evaluate(Complex z) const;
  // psi and psi' from the closed-form basis derivatives.
  ValueAndDerivative EvaluateWithDerivative(Complex z) const;
  // sum_k |a_k| |z|^k; the magnitude Horner rounding errors scale with.
  double RoundingScale(Complex z) const;

  // No domain check. The truncated polynomial is defined on all of C;
  // zero isolation needs it on cells that overhang a disk domain.
  ValueAndDerivative EvaluateUnchecked(Complex z) const;

  // Realized polynomial in the scaled variable y = z / EvaluationScale().
  const std::vector<Complex>& scaled_polynomial() const { return polynomial_; }

 private:
  void CheckPoint(Complex z) const;

  std::shared_ptr<const Ensemble> ensemble_;
  std::vector<Complex> coefficients_;
  std::vector<Complex> polynomial_;
  double inverse_scale_ = 1.0;
  std::uint64_t master_seed_ = 0;
  std::uint64_t trial_ = 0;
};

GafSample Draw(std::shared_ptr<const Ensemble> ensemble,
               const CoefficientLaw& law, std::uint64_t master_seed,
               std::uint64_t trial);

}  // namespace gafzeros

#endif  // GAFZEROS_SAMPLING_HPP_
