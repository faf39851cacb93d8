#include "htn/hazard.hpp"

#include <cassert>
#include <cmath>

#include "htn/errors.hpp"

namespace htn {

namespace {
constexpr double kInverseTol = 1e-12;
}

Hazard Hazard::linear(double a) {
  if (!(a > 0.0)) throw ValidationError("InvalidHazard", "linear slope must be positive");
  Hazard h;
  h.family_ = Family::Linear;
  h.a_ = a;
  return h;
}

Hazard Hazard::power(double a, double p) {
  if (!(a > 0.0) || !(p > 0.0))
    throw ValidationError("InvalidHazard", "power coefficients must be positive");
  Hazard h;
  h.family_ = Family::Power;
  h.a_ = a;
  h.p_ = p;
  return h;
}

Hazard Hazard::table(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2)
    throw ValidationError("InvalidHazard", "table needs at least two knots");
  if (knots.front().first != 0.0 || knots.front().second != 0.0)
    throw ValidationError("InvalidHazard", "table must start at (0,0)");
  for (std::size_t k = 1; k < knots.size(); ++k) {
    if (!(knots[k].first > knots[k - 1].first) || !(knots[k].second > knots[k - 1].second))
      throw ValidationError("InvalidHazard", "table knots must be strictly increasing in both coordinates");
  }
  Hazard h;
  h.family_ = Family::Table;
  h.knots_ = std::move(knots);
  return h;
}

double Hazard::operator()(double x) const {
  assert(x >= 0.0);
  switch (family_) {
    case Family::Linear:
      return a_ * x;
    case Family::Power:
      return a_ * std::pow(x, p_);
    case Family::Table: {
      std::size_t k = 1;
      while (k + 1 < knots_.size() && knots_[k].first < x) ++k;
      const auto& [x0, y0] = knots_[k - 1];
      const auto& [x1, y1] = knots_[k];
      return y0 + (y1 - y0) / (x1 - x0) * (x - x0);
    }
  }
  return 0.0;
}

double Hazard::inverse(double y) const {
  assert(y >= 0.0);
  switch (family_) {
    case Family::Linear:
      return y / a_;
    case Family::Power:
      return std::pow(y / a_, 1.0 / p_);
    case Family::Table: {
      if (y > knots_.back().second)
        throw ValidationError("RangeError", "value exceeds the table hazard range");
      double lo = 0.0;
      double hi = knots_.back().first;
      while (hi - lo > kInverseTol) {
        const double mid = 0.5 * (lo + hi);
        if ((*this)(mid) < y)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

}  // namespace htn
