#include "htn/rng.hpp"

#include <cmath>

namespace htn {
namespace rng {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Absorbs the key fields one by one through the splitmix64 finalizer, then
// runs one extra round so neighbouring counters decorrelate fully.
inline std::uint64_t key_hash(const StreamKey& k, std::uint64_t salt) {
  std::uint64_t h = mix(k.seed + kGolden);
  h = mix(h ^ (k.replication + 1) * kGolden);
  h = mix(h ^ (static_cast<std::uint64_t>(k.purpose) + 1) * kGolden);
  h = mix(h ^ (k.class_index + 1) * kGolden);
  h = mix(h ^ (k.customer_index + 1) * kGolden);
  h = mix(h ^ (salt + 1) * kGolden);
  return mix(h + kGolden);
}

// Top 53 bits, shifted into the open interval (0,1).
inline double to_unit_open(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double uniform(const StreamKey& key, std::uint64_t salt) { return to_unit_open(key_hash(key, salt)); }

double unit_exponential(const StreamKey& key, std::uint64_t salt) {
  return -std::log(uniform(key, salt));
}

double standard_normal(const StreamKey& key) {
  const double u1 = uniform(key, 0);
  const double u2 = uniform(key, 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double ia_draw(const Model& model, int cls, std::uint64_t seed, std::uint64_t replication, long j) {
  StreamKey key{seed, replication, Purpose::Interarrival, static_cast<std::uint64_t>(cls),
                static_cast<std::uint64_t>(j)};
  switch (model.cls(cls).ia.kind) {
    case IaDist::Kind::Exponential:
      return unit_exponential(key);
    case IaDist::Kind::Deterministic:
      return 1.0;
    case IaDist::Kind::Uniform: {
      const double a = model.cls(cls).ia.width;
      return 1.0 - 0.5 * a + a * uniform(key);
    }
  }
  return 1.0;
}

double workload(std::uint64_t seed, std::uint64_t replication, int cls, long j) {
  return unit_exponential(StreamKey{seed, replication, Purpose::Service,
                                    static_cast<std::uint64_t>(cls), static_cast<std::uint64_t>(j)});
}

double initial_workload(std::uint64_t seed, std::uint64_t replication, int cls, long k) {
  return unit_exponential(StreamKey{seed, replication, Purpose::InitialService,
                                    static_cast<std::uint64_t>(cls), static_cast<std::uint64_t>(k)});
}

std::vector<double> arrival_times(const Model& model, int cls, long n, std::uint64_t seed,
                                  std::uint64_t replication, double horizon) {
  const double rate = model.arrival_rate_n(cls, n);
  std::vector<double> times;
  double t = 0.0;
  for (long j = 1;; ++j) {
    t += ia_draw(model, cls, seed, replication, j) / rate;
    if (t > horizon) break;
    times.push_back(t);
  }
  return times;
}

}  // namespace rng
}  // namespace htn
