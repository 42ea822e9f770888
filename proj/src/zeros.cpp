#include "gafzeros/zeros.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "gafzeros/numeric.hpp"

namespace gafzeros {

DegreeDropError::DegreeDropError(int nominal, int realized)
    : std::runtime_error("realized polynomial has degree " +
                         std::to_string(realized) + " instead of " +
                         std::to_string(nominal) +
                         " (zero leading coefficient)"),
      nominal_(nominal),
      realized_(realized) {}

namespace {

// Below this |psi| / RoundingScale the contour is treated as passing
// through a zero.
constexpr double kBoundaryRatio = 1e-14;
constexpr int kMaxPanelDepth = 45;
constexpr double kIntegerGap = 1e-3;
// An unsettled count with a node this close to a zero is a boundary zero:
// the integral converges to a principal value, not to an integer.
constexpr double kNearZeroRatio = 1e-6;

bool InsideStrict(const Domain& area, Complex z) {
  if (area.kind() == Domain::Kind::kRectangle) {
    return z.real() > area.lower().real() && z.real() < area.upper().real() &&
           z.imag() > area.lower().imag() && z.imag() < area.upper().imag();
  }
  return std::abs(z - area.center()) < area.radius();
}

// One smooth piece of a closed contour, parametrized over t in [0, 1].
struct Piece {
  bool circle = false;
  Complex a;       // circle: center; segment: start
  Complex b;       // segment: end
  double radius = 0.0;

  void At(double t, Complex& z, Complex& dz) const {
    if (circle) {
      const Complex e = std::polar(radius, 2.0 * std::numbers::pi * t);
      z = a + e;
      dz = Complex(0.0, 2.0 * std::numbers::pi) * e;
    } else {
      z = a + t * (b - a);
      dz = b - a;
    }
  }
};

std::vector<Piece> Boundary(const Domain& region) {
  if (region.IsDisk()) {
    Piece p;
    p.circle = true;
    p.a = region.center();
    p.radius = region.radius();
    return {p};
  }
  const Complex lo = region.lower();
  const Complex hi = region.upper();
  const Complex c1{hi.real(), lo.imag()};
  const Complex c3{lo.real(), hi.imag()};
  return {Piece{false, lo, c1, 0.0}, Piece{false, c1, hi, 0.0},
          Piece{false, hi, c3, 0.0}, Piece{false, c3, lo, 0.0}};
}

class ContourIntegrator {
 public:
  ContourIntegrator(const GafSample& sample, double tolerance)
      : sample_(sample), tolerance_(tolerance) {}

  Complex Integrate(const Piece& piece, int initial_panels) {
    Complex total = 0.0;
    for (int i = 0; i < initial_panels; ++i) {
      const double a = static_cast<double>(i) / initial_panels;
      const double b = static_cast<double>(i + 1) / initial_panels;
      total += Adaptive(piece, a, b, Panel(piece, a, b), 0);
    }
    return total;
  }

  double min_ratio() const { return min_ratio_; }
  int panels() const { return panels_; }

 private:
  // Panel value and the size of its rounding noise.
  struct Estimate {
    Complex value;
    double noise = 0.0;
  };

  Estimate Integrand(const Piece& piece, double t) {
    Complex z;
    Complex dz;
    piece.At(t, z, dz);
    const auto vd = sample_.EvaluateUnchecked(z);
    const double scale = sample_.RoundingScale(z);
    const double ratio = scale > 0.0 ? std::abs(vd.value) / scale : 0.0;
    min_ratio_ = std::min(min_ratio_, ratio);
    if (!(ratio > kBoundaryRatio)) {
      throw BoundaryZeroError("contour passes through a zero near " +
                              std::to_string(z.real()) + "," +
                              std::to_string(z.imag()));
    }
    const Complex f = vd.derivative / vd.value * dz;
    return {f, std::abs(f) * 64.0 * std::numeric_limits<double>::epsilon() /
                   ratio};
  }

  Estimate Panel(const Piece& piece, double a, double b) {
    const auto& rule = GaussLegendre16();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    Estimate sum;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const Estimate e = Integrand(piece, mid + half * rule.nodes[i]);
      sum.value += rule.weights[i] * e.value;
      sum.noise += rule.weights[i] * e.noise;
    }
    return {half * sum.value, half * sum.noise};
  }

  Complex Adaptive(const Piece& piece, double a, double b, Estimate whole,
                   int depth) {
    const double mid = 0.5 * (a + b);
    const Estimate left = Panel(piece, a, mid);
    const Estimate right = Panel(piece, mid, b);
    const Complex refined = left.value + right.value;
    const double error = std::abs(whole.value - refined);
    // Near a zero the evaluation noise, not the rule, bounds the error.
    const double noise = whole.noise + left.noise + right.noise;
    if (error <= tolerance_ * (b - a) || error <= 1e-13 * std::abs(refined) ||
        error <= noise) {
      ++panels_;
      return refined;
    }
    if (depth >= kMaxPanelDepth) {
      throw BoundaryZeroError(
          "contour quadrature cannot resolve a zero next to the boundary");
    }
    return Adaptive(piece, a, mid, left, depth + 1) +
           Adaptive(piece, mid, b, right, depth + 1);
  }

  const GafSample& sample_;
  double tolerance_;
  double min_ratio_ = std::numeric_limits<double>::infinity();
  int panels_ = 0;
};

ContourCount IntegrateBoundary(const GafSample& sample, const Domain& region) {
  const auto pieces = Boundary(region);
  const int initial = region.IsDisk() ? 8 : 2;
  double tolerance = 1e-8;
  ContourCount result;
  result.region = region;
  for (int attempt = 0; attempt < 3; ++attempt, tolerance *= 1e-3) {
    ContourIntegrator integrator(sample, tolerance);
    Complex total = 0.0;
    for (const auto& piece : pieces) total += integrator.Integrate(piece, initial);
    result.unrounded = total / Complex(0.0, 2.0 * std::numbers::pi);
    const double rounded = std::round(result.unrounded.real());
    result.count = static_cast<int>(rounded);
    result.integer_gap = std::max(std::abs(result.unrounded.real() - rounded),
                                  std::abs(result.unrounded.imag()));
    result.min_relative_modulus = integrator.min_ratio();
    result.panels = integrator.panels();
    if (result.integer_gap <= kIntegerGap) return result;
  }
  if (result.min_relative_modulus < kNearZeroRatio) {
    throw BoundaryZeroError("contour passes next to a zero (gap " +
                            std::to_string(result.integer_gap) + ")");
  }
  throw ConvergenceError("argument principle did not settle on an integer (gap " +
                         std::to_string(result.integer_gap) + ")");
}

}  // namespace

int ZeroSet::TotalCount() const {
  int total = 0;
  for (const auto& z : zeros) total += z.multiplicity;
  return total;
}

int ZeroSet::CountInside(const Domain& area) const {
  int total = 0;
  for (const auto& z : zeros) {
    if (InsideStrict(area, z.location)) total += z.multiplicity;
  }
  return total;
}

ContourCount ArgumentPrinciple(const GafSample& sample, const Domain& region) {
  if (!sample.ensemble().domain().ContainsDomain(region)) {
    throw OutsideDomain("region " + region.ToString() +
                        " is not inside the ensemble domain " +
                        sample.ensemble().domain().ToString());
  }
  return IntegrateBoundary(sample, region);
}

ContourCount CountInRegionDetailed(const GafSample& sample,
                                   const Domain& region) {
  for (int k = 0;; ++k) {
    const Domain attempt =
        k == 0 ? region : region.Dilated(1.0 + kJitterStep * k);
    try {
      ContourCount result = ArgumentPrinciple(sample, attempt);
      result.jitter_retries = k;
      return result;
    } catch (const BoundaryZeroError&) {
      if (k >= kMaxJitterRetries) {
        throw ConvergenceError("boundary zero persists after " +
                               std::to_string(kMaxJitterRetries) +
                               " jitter retries on " + region.ToString());
      }
    }
  }
}

int CountInRegion(const GafSample& sample, const Domain& region) {
  return CountInRegionDetailed(sample, region).count;
}

namespace {

struct Cell {
  double x0, y0, x1, y1;
  int count;

  Complex Center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  double HalfSize() const { return 0.5 * std::max(x1 - x0, y1 - y0); }
  Domain AsDomain() const { return Domain::Rectangle({x0, y0}, {x1, y1}); }
};

bool Intersects(const Cell& cell, const Domain& region) {
  if (region.kind() == Domain::Kind::kRectangle) {
    return cell.x0 <= region.upper().real() && cell.x1 >= region.lower().real() &&
           cell.y0 <= region.upper().imag() && cell.y1 >= region.lower().imag();
  }
  const Complex c = region.center();
  const double dx = std::max({cell.x0 - c.real(), 0.0, c.real() - cell.x1});
  const double dy = std::max({cell.y0 - c.imag(), 0.0, c.imag() - cell.y1});
  return std::hypot(dx, dy) <= region.radius();
}

class QuadtreeLocator {
 public:
  QuadtreeLocator(const GafSample& sample, const Domain& region)
      : sample_(sample), region_(region), scale_(region.Scale()) {}

  std::vector<Zero> Run() {
    std::deque<Cell> queue{RootCell()};
    int processed = 0;
    while (!queue.empty()) {
      if (++processed > kMaxCells) {
        throw ConvergenceError("zero isolation exceeded the cell budget");
      }
      const Cell cell = queue.front();
      queue.pop_front();
      if (cell.count == 0 || !Intersects(cell, region_)) continue;
      const double min_half = 0.5 * kMergeTolerance * scale_;
      Complex root;
      if (cell.count == 1 && Newton(cell, root)) {
        found_.push_back({root, 1});
        continue;
      }
      if (cell.HalfSize() <= min_half) {
        found_.push_back({cell.Center(), cell.count});
        continue;
      }
      Subdivide(cell, queue);
    }
    return found_;
  }

 private:
  static constexpr int kMaxCells = 200000;

  int Count(double x0, double y0, double x1, double y1) const {
    return IntegrateBoundary(sample_, Domain::Rectangle({x0, y0}, {x1, y1}))
        .count;
  }

  Cell RootCell() const {
    Complex c = region_.center();
    double hx = scale_;
    double hy = scale_;
    if (region_.kind() == Domain::Kind::kRectangle) {
      hx = 0.5 * (region_.upper().real() - region_.lower().real());
      hy = 0.5 * (region_.upper().imag() - region_.lower().imag());
    }
    for (int k = 0; k <= kMaxJitterRetries; ++k) {
      const double f = 1.0 + 1e-3 * k;
      Cell cell{c.real() - f * hx, c.imag() - f * hy, c.real() + f * hx,
                c.imag() + f * hy, 0};
      try {
        cell.count = Count(cell.x0, cell.y0, cell.x1, cell.y1);
        return cell;
      } catch (const BoundaryZeroError&) {
      }
    }
    throw ConvergenceError("cannot place the root cell of the quadtree");
  }

  void Subdivide(const Cell& cell, std::deque<Cell>& queue) {
    static constexpr std::array<std::array<double, 2>, 6> kOffsets{{
        {0.0123, 0.0171},
        {-0.0311, 0.0237},
        {0.0419, -0.0353},
        {-0.0527, -0.0461},
        {0.0631, 0.0579},
        {-0.1013, 0.0797},
    }};
    const double hx = 0.5 * (cell.x1 - cell.x0);
    const double hy = 0.5 * (cell.y1 - cell.y0);
    const Complex c = cell.Center();
    for (const auto& offset : kOffsets) {
      const double xs = c.real() + offset[0] * hx;
      const double ys = c.imag() + offset[1] * hy;
      try {
        const std::array<Cell, 4> children{{
            {cell.x0, cell.y0, xs, ys, Count(cell.x0, cell.y0, xs, ys)},
            {xs, cell.y0, cell.x1, ys, Count(xs, cell.y0, cell.x1, ys)},
            {cell.x0, ys, xs, cell.y1, Count(cell.x0, ys, xs, cell.y1)},
            {xs, ys, cell.x1, cell.y1, Count(xs, ys, cell.x1, cell.y1)},
        }};
        int sum = 0;
        for (const auto& child : children) sum += child.count;
        if (sum != cell.count) continue;
        for (const auto& child : children) {
          if (child.count > 0) queue.push_back(child);
        }
        return;
      } catch (const BoundaryZeroError&) {
      } catch (const ConvergenceError&) {
      }
    }
    // Evaluation noise dominates in very small cells around a cluster.
    if (cell.HalfSize() <= 1e-4 * scale_) {
      found_.push_back({cell.Center(), cell.count});
      return;
    }
    throw ConvergenceError("cannot subdivide quadtree cell " +
                           cell.AsDomain().ToString());
  }

  bool Newton(const Cell& cell, Complex& root) const {
    Complex z = cell.Center();
    const double half = cell.HalfSize();
    const Complex c = cell.Center();
    for (int iter = 0; iter < 60; ++iter) {
      const auto vd = sample_.EvaluateUnchecked(z);
      if (std::abs(vd.value) <= 1e-12 * sample_.RoundingScale(z)) break;
      if (vd.derivative == Complex(0.0)) return false;
      const Complex step = vd.value / vd.derivative;
      z -= step;
      if (std::abs(z - c) > 4.0 * half) return false;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                std::max(std::abs(z), scale_)) {
        break;
      }
    }
    const auto vd = sample_.EvaluateUnchecked(z);
    if (std::abs(vd.value) > 1e-8 * sample_.RoundingScale(z)) return false;
    const double slack = 1e-10 * scale_;
    if (z.real() < cell.x0 - slack || z.real() > cell.x1 + slack ||
        z.imag() < cell.y0 - slack || z.imag() > cell.y1 + slack) {
      return false;
    }
    root = z;
    return true;
  }

  const GafSample& sample_;
  Domain region_;
  double scale_;
  std::vector<Zero> found_;
};

std::vector<Zero> MergeClose(std::vector<Zero> zeros, double distance) {
  std::vector<Zero> merged;
  std::vector<bool> used(zeros.size(), false);
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<std::size_t> group{i};
    for (std::size_t g = 0; g < group.size(); ++g) {
      for (std::size_t j = 0; j < zeros.size(); ++j) {
        if (!used[j] &&
            std::abs(zeros[j].location - zeros[group[g]].location) <= distance) {
          used[j] = true;
          group.push_back(j);
        }
      }
    }
    Zero z{0.0, 0};
    for (auto k : group) {
      z.location += static_cast<double>(zeros[k].multiplicity) * zeros[k].location;
      z.multiplicity += zeros[k].multiplicity;
    }
    z.location /= static_cast<double>(z.multiplicity);
    merged.push_back(z);
  }
  return merged;
}

ZeroSet LocateOnce(const GafSample& sample, const Domain& region) {
  const ContourCount total = ArgumentPrinciple(sample, region);
  ZeroSet result;
  result.region = region;
  result.method = ZeroSet::Method::kArgumentPrinciple;
  if (total.count == 0) return result;

  QuadtreeLocator locator(sample, region);
  auto zeros =
      MergeClose(locator.Run(), kMergeTolerance * region.Scale());
  for (const auto& z : zeros) {
    if (InsideStrict(region, z.location)) result.zeros.push_back(z);
  }
  std::sort(result.zeros.begin(), result.zeros.end(),
            [](const Zero& a, const Zero& b) {
              return a.location.real() < b.location.real() ||
                     (a.location.real() == b.location.real() &&
                      a.location.imag() < b.location.imag());
            });
  if (result.TotalCount() != total.count) {
    throw BoundaryZeroError("located " + std::to_string(result.TotalCount()) +
                            " zeros but the contour counts " +
                            std::to_string(total.count));
  }
  return result;
}

}  // namespace

ZeroSet Locate(const GafSample& sample, const Domain& region) {
  for (int k = 0;; ++k) {
    const Domain attempt =
        k == 0 ? region : region.Dilated(1.0 + kJitterStep * k);
    try {
      ZeroSet result = LocateOnce(sample, attempt);
      result.jitter_retries = k;
      return result;
    } catch (const BoundaryZeroError&) {
      if (k >= kMaxJitterRetries) {
        throw ConvergenceError("zero location failed after " +
                               std::to_string(kMaxJitterRetries) +
                               " jitter retries on " + region.ToString());
      }
    }
  }
}

std::vector<Zero> ClusterRoots(const std::vector<Complex>& roots,
                               double scale) {
  struct Group {
    std::vector<Complex> members;
    Complex Centroid() const {
      Complex c = 0.0;
      for (auto m : members) c += m;
      return c / static_cast<double>(members.size());
    }
  };
  auto tolerance = [](std::size_t m) {
    const double eps = std::numeric_limits<double>::epsilon();
    return std::max(kMergeTolerance,
                    4.0 * std::pow(64.0 * eps, 1.0 / static_cast<double>(m)));
  };
  std::vector<Group> groups;
  for (auto r : roots) groups.push_back({{r}});
  bool merged = true;
  while (merged) {
    merged = false;
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        const double d = std::abs(groups[i].Centroid() - groups[j].Centroid());
        if (d >= best) continue;
        Group joined = groups[i];
        joined.members.insert(joined.members.end(), groups[j].members.begin(),
                              groups[j].members.end());
        double diameter = 0.0;
        for (auto a : joined.members) {
          for (auto b : joined.members) diameter = std::max(diameter, std::abs(a - b));
        }
        const double local = std::max(scale, std::abs(joined.Centroid()));
        if (diameter <= tolerance(joined.members.size()) * local) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (std::isfinite(best)) {
      groups[bi].members.insert(groups[bi].members.end(),
                                groups[bj].members.begin(),
                                groups[bj].members.end());
      groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(bj));
      merged = true;
    }
  }
  std::vector<Zero> zeros;
  zeros.reserve(groups.size());
  for (const auto& g : groups) {
    zeros.push_back({g.Centroid(), static_cast<int>(g.members.size())});
  }
  return zeros;
}

ZeroSet CompanionRoots(const GafSample& sample) {
  std::vector<Complex> poly = sample.scaled_polynomial();
  const int nominal = static_cast<int>(poly.size()) - 1;
  while (!poly.empty() && poly.back() == Complex(0.0)) poly.pop_back();
  const int realized = static_cast<int>(poly.size()) - 1;
  if (realized < nominal) throw DegreeDropError(nominal, std::max(realized, 0));
  const double scale = sample.ensemble().EvaluationScale();
  auto roots = CompanionEigenvalues(poly);
  for (auto& r : roots) r *= scale;
  ZeroSet result;
  result.zeros = ClusterRoots(roots, 1.0);
  result.region = sample.ensemble().domain();
  result.method = ZeroSet::Method::kCompanionMatrix;
  return result;
}

double LinearStatistic(const ZeroSet& zeros, const TestFunction& phi) {
  if (!zeros.region.ContainsDomain(phi.Support())) {
    throw InvalidArgument("zero set region " + zeros.region.ToString() +
                          " does not cover the support of phi " +
                          phi.Support().ToString());
  }
  double total = 0.0;
  for (const auto& z : zeros.zeros) total += z.multiplicity * phi(z.location);
  return total;
}

}  // namespace gafzeros
