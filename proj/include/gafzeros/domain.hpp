#ifndef GAFZEROS_DOMAIN_HPP_
#define GAFZEROS_DOMAIN_HPP_

#include <complex>
#include <stdexcept>
#include <string>

namespace gafzeros {

using Complex = std::complex<double>;

// Raised for invalid parameters; the message names the offending field.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a point or region falls outside the domain it is used on.
class OutsideDomain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A plane domain: a closed disk, an axis-aligned rectangle, or a
// plane-window (a disk centered at the origin used to expose
// entire-function ensembles on compact sets).
class Domain {
 public:
  enum class Kind { kDisk, kRectangle, kPlaneWindow };

  static Domain Disk(Complex center, double radius);
  static Domain Rectangle(Complex corner_a, Complex corner_b);
  static Domain PlaneWindow(double radius);

  Kind kind() const { return kind_; }
  Complex center() const { return center_; }
  double radius() const { return radius_; }
  // Lower-left and upper-right corners of a rectangle.
  Complex lower() const { return lower_; }
  Complex upper() const { return upper_; }

  // Closed containment with a relative slack of `kContainmentSlack`
  // times the domain scale, so that jittered regions touching the
  // boundary are still accepted.
  bool Contains(Complex z) const;
  // True when `other` lies inside this domain (same slack).
  bool ContainsDomain(const Domain& other) const;

  double MaxModulus() const;
  double MinModulus() const;
  // Half-width of the bounding square.
  double Scale() const;
  // A disk or window is a disk; rectangles are not.
  bool IsDisk() const { return kind_ != Kind::kRectangle; }

  // Same shape scaled about its center by `factor`.
  Domain Dilated(double factor) const;

  std::string ToString() const;

  static constexpr double kContainmentSlack = 1e-5;

 private:
  Domain() = default;

  Kind kind_ = Kind::kDisk;
  Complex center_{0.0, 0.0};
  double radius_ = 1.0;
  Complex lower_{0.0, 0.0};
  Complex upper_{0.0, 0.0};
};

// Parses "disk:cx,cy,r", "rect:x0,y0,x1,y1" or "window:r".
Domain ParseRegion(const std::string& spec);

}  // namespace gafzeros

#endif  // GAFZEROS_DOMAIN_HPP_
