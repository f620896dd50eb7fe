#include "phonon/reflection.hpp"

#include "phonon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phonon {

double eta_tanh(double omega, double a, double b) {
  const double v = 0.25 * std::tanh(10.0 * (omega - a)) - 0.25 * std::tanh(2.0 * (omega - b)) + 0.5;
  return std::clamp(v, 0.0, 1.0);
}

ReflectionModel ReflectionModel::tanh_param(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw ConfigError("eta: tanh parameters must be finite");
  return ReflectionModel(Kind::tanh_param, a, b);
}

ReflectionModel ReflectionModel::table(TabulatedLaw rows) {
  FrequencyLaw check(rows);  // validates ordering
  ReflectionModel m(Kind::table, 0.0, 0.0);
  m.rows_ = std::move(rows.rows);
  return m;
}

ReflectionModel ReflectionModel::constant(double value) {
  if (!std::isfinite(value)) throw ConfigError("eta: constant must be finite");
  return ReflectionModel(Kind::constant, value, 0.0);
}

double ReflectionModel::operator()(double omega) const {
  switch (kind_) {
    case Kind::tanh_param:
      return eta_tanh(omega, a_, b_);
    case Kind::constant:
      return std::clamp(a_, 0.0, 1.0);
    case Kind::table: {
      auto it = std::upper_bound(rows_.begin(), rows_.end(), omega,
                                 [](double w, const auto& r) { return w < r.first; });
      const double v = it == rows_.begin() ? rows_.front().second : std::prev(it)->second;
      return std::clamp(v, 0.0, 1.0);
    }
  }
  return 0.0;
}

std::vector<double> ReflectionModel::sample(std::span<const double> omega_nodes) const {
  std::vector<double> out;
  out.reserve(omega_nodes.size());
  for (double w : omega_nodes) out.push_back((*this)(w));
  return out;
}

std::string ReflectionModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::tanh_param:
      os << "tanh(a=" << a_ << ",b=" << b_ << ")";
      break;
    case Kind::constant:
      os << "constant(" << a_ << ")";
      break;
    case Kind::table:
      os << "table(" << rows_.size() << " rows)";
      break;
  }
  return os.str();
}

}  // namespace phonon
