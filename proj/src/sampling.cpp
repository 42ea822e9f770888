#include "gafzeros/sampling.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace gafzeros {

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

CoefficientLaw CoefficientLaw::Gaussian() { return CoefficientLaw(); }

CoefficientLaw CoefficientLaw::RotationInvariant(Quantile quantile,
                                                 std::string name) {
  if (!quantile) throw InvalidArgument("law.quantile must be callable");
  for (double u : {1e-9, 1e-3, 0.25, 0.5, 0.75, 0.999}) {
    const double q = quantile(u);
    if (!(q > 0.0) || !std::isfinite(q)) {
      throw InvalidArgument("law.quantile must be positive and finite on (0, 1)");
    }
  }
  const double second_moment =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double u) {
            const double q = quantile(u);
            return q * q;
          },
          0.0, 1.0, 15, 1e-10);
  if (std::abs(second_moment - 1.0) > 1e-3) {
    throw InvalidArgument("law.quantile violates E|omega|^2 = 1 (got " +
                          std::to_string(second_moment) + ")");
  }
  CoefficientLaw law;
  law.quantile_ = std::move(quantile);
  law.name_ = std::move(name);
  return law;
}

CoefficientLaw CoefficientLaw::FromName(const std::string& name) {
  if (name == "gaussian") return Gaussian();
  if (name == "unit-circle") {
    return RotationInvariant([](double) { return 1.0; }, name);
  }
  if (name == "uniform-disk") {
    return RotationInvariant([](double u) { return std::sqrt(2.0 * u); }, name);
  }
  throw InvalidArgument("law.kind: unknown law '" + name + "'");
}

Complex CoefficientLaw::Draw(std::mt19937_64& rng) const {
  if (!quantile_) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
  }
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double u = uniform(rng);
  while (u == 0.0) u = uniform(rng);
  const double theta = 2.0 * std::numbers::pi * uniform(rng);
  return std::polar(quantile_(u), theta);
}

std::uint64_t TrialStreamSeed(std::uint64_t master_seed, std::uint64_t trial) {
  return SplitMix64(SplitMix64(master_seed) ^ SplitMix64(~trial));
}

GafSample::GafSample(std::shared_ptr<const Ensemble> ensemble,
                     std::vector<Complex> coefficients,
                     std::uint64_t master_seed, std::uint64_t trial)
    : ensemble_(std::move(ensemble)),
      coefficients_(std::move(coefficients)),
      master_seed_(master_seed),
      trial_(trial) {
  if (!ensemble_) throw InvalidArgument("sample requires an ensemble");
  polynomial_ = ensemble_->ScaledPolynomial(coefficients_);
  inverse_scale_ = 1.0 / ensemble_->EvaluationScale();
}

void GafSample::CheckPoint(Complex z) const {
  if (!ensemble_->domain().Contains(z)) {
    throw OutsideDomain("evaluation point outside ensemble domain " +
                        ensemble_->domain().ToString());
  }
}

Complex GafSample::Evaluate(Complex z) const {
  return EvaluateWithDerivative(z).value;
}

ValueAndDerivative GafSample::EvaluateWithDerivative(Complex z) const {
  CheckPoint(z);
  return EvaluateUnchecked(z);
}

ValueAndDerivative GafSample::EvaluateUnchecked(Complex z) const {
  auto result = EvaluatePolynomial(polynomial_, z * inverse_scale_);
  result.derivative *= inverse_scale_;
  return result;
}

double GafSample::RoundingScale(Complex z) const {
  return AbsolutePolynomial(polynomial_, std::abs(z) * inverse_scale_);
}

GafSample Draw(std::shared_ptr<const Ensemble> ensemble,
               const CoefficientLaw& law, std::uint64_t master_seed,
               std::uint64_t trial) {
  if (!ensemble) throw InvalidArgument("draw requires an ensemble");
  std::mt19937_64 rng(TrialStreamSeed(master_seed, trial));
  std::vector<Complex> omega(static_cast<std::size_t>(ensemble->NumCoefficients()));
  for (auto& w : omega) w = law.Draw(rng);
  return GafSample(std::move(ensemble), std::move(omega), master_seed, trial);
}

}  // namespace gafzeros
