#include "phonon/profile.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace phonon {
namespace {

double raw_bump(double y) {
  if (y <= 0.0 || y >= 1.0) return 0.0;
  return std::exp(-1.0 / (y * (1.0 - y)));
}

double integrate_raw(double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 31>::integrate(raw_bump, a, b, 12, 1e-14);
}

double normalization() {
  static const double z = integrate_raw(0.0, 1.0);
  return z;
}

}  // namespace

double bump_density(double y) { return raw_bump(y) / normalization(); }

double bump_cdf(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  // symmetric about 1/2: integrate over the shorter side
  if (y > 0.5) return 1.0 - integrate_raw(y, 1.0) / normalization();
  return integrate_raw(0.0, y) / normalization();
}

Profile Profile::bump(double origin, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("bump profile needs width > 0");
  return Profile(Kind::bump, origin, origin + width);
}

Profile Profile::boxcar(double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("boxcar profile needs hi > lo");
  return Profile(Kind::boxcar, lo, hi);
}

Profile Profile::delta(double at) { return Profile(Kind::delta, at, at); }

double Profile::density(double y) const {
  switch (kind_) {
    case Kind::bump: {
      const double w = hi_ - lo_;
      return bump_density((y - lo_) / w) / w;
    }
    case Kind::boxcar:
      return (y >= lo_ && y < hi_) ? 1.0 / (hi_ - lo_) : 0.0;
    case Kind::delta:
      break;
  }
  throw std::logic_error("point density of a delta profile is undefined");
}

double Profile::mass(double a, double b) const {
  if (!(b > a)) return 0.0;
  switch (kind_) {
    case Kind::bump: {
      const double w = hi_ - lo_;
      return bump_cdf((b - lo_) / w) - bump_cdf((a - lo_) / w);
    }
    case Kind::boxcar: {
      const double l = std::max(a, lo_);
      const double h = std::min(b, hi_);
      return h > l ? (h - l) / (hi_ - lo_) : 0.0;
    }
    case Kind::delta:
      return (lo_ >= a && lo_ < b) ? 1.0 : 0.0;
  }
  return 0.0;
}

double Profile::peak() const {
  switch (kind_) {
    case Kind::bump:
      return bump_density(0.5) / (hi_ - lo_);
    case Kind::boxcar:
      return 1.0 / (hi_ - lo_);
    case Kind::delta:
      break;
  }
  return std::numeric_limits<double>::infinity();
}

std::string Profile::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::bump:
      os << "bump[" << lo_ << "," << hi_ << "]";
      break;
    case Kind::boxcar:
      os << "boxcar[" << lo_ << "," << hi_ << ")";
      break;
    case Kind::delta:
      os << "delta(" << lo_ << ")";
      break;
  }
  return os.str();
}

}  // namespace phonon
