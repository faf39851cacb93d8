#include "htn/skorohod.hpp"

#include <algorithm>

namespace htn {

SkorohodResult skorohod_map(const std::vector<std::vector<double>>& f, double bound) {
  SkorohodResult out;
  out.y = f;
  out.g.resize(f.size());
  double running = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    double sum = 0.0;
    for (double c : f[k]) sum += c;
    running = std::max(running, sum - bound);  // (bound - 1.f)^-
    out.g[k] = running;
    out.y[k].back() -= running;
  }
  return out;
}

}  // namespace htn
