#pragma once

#include <utility>
#include <vector>

namespace htn {

// Waiting-cost function h: R+ -> R+, continuous, strictly increasing, h(0)=0.
// Three families: linear a*x, power a*x^p, and a piecewise-linear table of
// knots starting at (0,0). Table evaluation extrapolates past the last knot
// with the final segment slope so the function stays strictly increasing on
// all of R+.
class Hazard {
 public:
  enum class Family { Linear, Power, Table };

  static Hazard linear(double a);
  static Hazard power(double a, double p);
  static Hazard table(std::vector<std::pair<double, double>> knots);

  double operator()(double x) const;

  // Solves h(x) = y. Closed form for linear/power; bisection to absolute
  // tolerance 1e-12 for tables. Throws RangeError if y exceeds the last
  // table knot value.
  double inverse(double y) const;

  Family family() const { return family_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  double param_a() const { return a_; }
  double param_p() const { return p_; }

 private:
  Hazard() = default;

  Family family_ = Family::Linear;
  double a_ = 1.0;
  double p_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
};

}  // namespace htn
