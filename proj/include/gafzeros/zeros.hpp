#ifndef GAFZEROS_ZEROS_HPP_
#define GAFZEROS_ZEROS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "gafzeros/bump.hpp"
#include "gafzeros/domain.hpp"
#include "gafzeros/sampling.hpp"

namespace gafzeros {

// The contour passes through (or numerically onto) a zero of psi.
class BoundaryZeroError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The realized polynomial lost degree (zero leading coefficient).
class DegreeDropError : public std::runtime_error {
 public:
  DegreeDropError(int nominal, int realized);
  int nominal_degree() const { return nominal_; }
  int realized_degree() const { return realized_; }

 private:
  int nominal_;
  int realized_;
};

struct Zero {
  Complex location;
  int multiplicity = 1;
};

struct ZeroSet {
  enum class Method { kArgumentPrinciple, kCompanionMatrix };

  std::vector<Zero> zeros;
  Domain region = Domain::PlaneWindow(1.0);
  Method method = Method::kArgumentPrinciple;
  // Boundary-zero retries needed before the region was accepted.
  int jitter_retries = 0;

  int TotalCount() const;
  // Zeros strictly inside `area`, counted with multiplicity.
  int CountInside(const Domain& area) const;
};

struct ContourCount {
  int count = 0;
  // (1 / 2 pi i) * contour integral of psi'/psi before rounding.
  Complex unrounded;
  double integer_gap = 0.0;
  // min over quadrature nodes of |psi| / RoundingScale.
  double min_relative_modulus = 0.0;
  int panels = 0;
  int jitter_retries = 0;
  Domain region = Domain::PlaneWindow(1.0);
};

// Merge distance for near-coincident zeros, relative to the region scale.
inline constexpr double kMergeTolerance = 1e-7;
// Boundary-zero retries: radius (or half-widths) times 1 + kJitterStep * k.
inline constexpr double kJitterStep = 1e-6;
inline constexpr int kMaxJitterRetries = 5;

// Argument principle on the boundary of `region` with adaptive
// Gauss-Legendre panels; no jitter. Throws BoundaryZeroError if the
// contour runs through a zero and ConvergenceError if the result does not
// settle within 1e-3 of an integer.
ContourCount ArgumentPrinciple(const GafSample& sample, const Domain& region);

// ArgumentPrinciple with the boundary-zero jitter policy applied.
ContourCount CountInRegionDetailed(const GafSample& sample,
                                   const Domain& region);
int CountInRegion(const GafSample& sample, const Domain& region);

// Quadtree isolation driven by contour counts, then Newton refinement.
ZeroSet Locate(const GafSample& sample, const Domain& region);

// All roots of the realized polynomial from the companion matrix;
// near-coincident roots are grouped with a multiplicity-aware tolerance.
ZeroSet CompanionRoots(const GafSample& sample);

// Groups roots whose spread is consistent with a multiple root: a group
// of m roots is merged when its diameter is below
// max(kMergeTolerance, 4 (64 eps)^{1/m}) * scale.
std::vector<Zero> ClusterRoots(const std::vector<Complex>& roots, double scale);

// sum over zeros of multiplicity * phi(location). The zero set's region
// must cover the support of phi.
double LinearStatistic(const ZeroSet& zeros, const TestFunction& phi);

}  // namespace gafzeros

#endif  // GAFZEROS_ZEROS_HPP_
