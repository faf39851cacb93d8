#pragma once

#include <vector>

namespace htn {

// Skorohod problem in {y : 1.y <= bound} with reflection in direction -e_N.
struct SkorohodResult {
  std::vector<std::vector<double>> y;  // constrained path, time-major
  std::vector<double> g;               // scalar regulator, nondecreasing
};

// Exact on piecewise-constant paths: g(t) = max over sample points u <= t of
// (bound - 1.f(u))^-, applied to the last coordinate. Maintains a running
// max, one pass.
SkorohodResult skorohod_map(const std::vector<std::vector<double>>& f, double bound);

}  // namespace htn
