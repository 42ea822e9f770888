#include "gafzeros/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace gafzeros {

Domain Domain::Disk(Complex center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("domain.radius must be a positive finite number");
  }
  Domain d;
  d.kind_ = Kind::kDisk;
  d.center_ = center;
  d.radius_ = radius;
  return d;
}

Domain Domain::Rectangle(Complex corner_a, Complex corner_b) {
  if (corner_a.real() == corner_b.real() ||
      corner_a.imag() == corner_b.imag()) {
    throw InvalidArgument(
        "domain.corners must differ in both coordinates");
  }
  Domain d;
  d.kind_ = Kind::kRectangle;
  d.lower_ = {std::min(corner_a.real(), corner_b.real()),
              std::min(corner_a.imag(), corner_b.imag())};
  d.upper_ = {std::max(corner_a.real(), corner_b.real()),
              std::max(corner_a.imag(), corner_b.imag())};
  d.center_ = 0.5 * (d.lower_ + d.upper_);
  d.radius_ = 0.5 * std::abs(d.upper_ - d.lower_);
  return d;
}

Domain Domain::PlaneWindow(double radius) {
  Domain d = Disk({0.0, 0.0}, radius);
  d.kind_ = Kind::kPlaneWindow;
  return d;
}

double Domain::Scale() const {
  if (kind_ == Kind::kRectangle) {
    return 0.5 * std::max(upper_.real() - lower_.real(),
                          upper_.imag() - lower_.imag());
  }
  return radius_;
}

bool Domain::Contains(Complex z) const {
  const double slack = kContainmentSlack * Scale();
  if (kind_ == Kind::kRectangle) {
    return z.real() >= lower_.real() - slack &&
           z.real() <= upper_.real() + slack &&
           z.imag() >= lower_.imag() - slack &&
           z.imag() <= upper_.imag() + slack;
  }
  return std::abs(z - center_) <= radius_ + slack;
}

bool Domain::ContainsDomain(const Domain& other) const {
  const double slack = kContainmentSlack * Scale();
  if (other.kind_ == Kind::kRectangle) {
    const Complex corners[] = {other.lower_, other.upper_,
                               {other.lower_.real(), other.upper_.imag()},
                               {other.upper_.real(), other.lower_.imag()}};
    return std::all_of(std::begin(corners), std::end(corners),
                       [&](Complex c) { return Contains(c); });
  }
  if (kind_ == Kind::kRectangle) {
    return other.center_.real() - other.radius_ >= lower_.real() - slack &&
           other.center_.real() + other.radius_ <= upper_.real() + slack &&
           other.center_.imag() - other.radius_ >= lower_.imag() - slack &&
           other.center_.imag() + other.radius_ <= upper_.imag() + slack;
  }
  return std::abs(other.center_ - center_) + other.radius_ <=
         radius_ + slack;
}

double Domain::MaxModulus() const {
  if (kind_ == Kind::kRectangle) {
    const double x = std::max(std::abs(lower_.real()), std::abs(upper_.real()));
    const double y = std::max(std::abs(lower_.imag()), std::abs(upper_.imag()));
    return std::hypot(x, y);
  }
  return std::abs(center_) + radius_;
}

double Domain::MinModulus() const {
  if (kind_ == Kind::kRectangle) {
    const double x = std::clamp(0.0, lower_.real(), upper_.real());
    const double y = std::clamp(0.0, lower_.imag(), upper_.imag());
    return std::hypot(x, y);
  }
  return std::max(0.0, std::abs(center_) - radius_);
}

Domain Domain::Dilated(double factor) const {
  if (kind_ == Kind::kRectangle) {
    return Rectangle(center_ + factor * (lower_ - center_),
                     center_ + factor * (upper_ - center_));
  }
  Domain d = *this;
  d.radius_ *= factor;
  return d;
}

std::string Domain::ToString() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind_) {
    case Kind::kDisk:
      out << "disk:" << center_.real() << "," << center_.imag() << ","
          << radius_;
      break;
    case Kind::kPlaneWindow:
      out << "window:" << radius_;
      break;
    case Kind::kRectangle:
      out << "rect:" << lower_.real() << "," << lower_.imag() << ","
          << upper_.real() << "," << upper_.imag();
      break;
  }
  return out.str();
}

namespace {

std::vector<double> ParseNumbers(const std::string& text,
                                 const std::string& field) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument(field + ": '" + item + "' is not a number");
    }
  }
  return values;
}

}  // namespace

Domain ParseRegion(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw InvalidArgument("region: expected <kind>:<numbers>, got '" + spec +
                          "'");
  }
  const std::string kind = spec.substr(0, colon);
  const auto values = ParseNumbers(spec.substr(colon + 1), "region");
  if (kind == "disk" && values.size() == 3) {
    return Domain::Disk({values[0], values[1]}, values[2]);
  }
  if (kind == "rect" && values.size() == 4) {
    return Domain::Rectangle({values[0], values[1]}, {values[2], values[3]});
  }
  if (kind == "window" && values.size() == 1) {
    return Domain::PlaneWindow(values[0]);
  }
  throw InvalidArgument("region: cannot parse '" + spec + "'");
}

}  // namespace gafzeros
