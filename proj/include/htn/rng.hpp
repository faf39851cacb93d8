#pragma once

#include <cstdint>
#include <vector>

#include "htn/model.hpp"

namespace htn {
namespace rng {

// Counter-based keyed generation: every draw is a pure function of its key,
// so reference and deviator scenarios, as well as parallel replications, see
// identical randomness without any draw-order bookkeeping.
enum class Purpose : std::uint64_t {
  Interarrival = 1,
  Service = 2,
  InitialService = 3,
  Gauss = 4,
  Sampling = 5,
};

struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  Purpose purpose = Purpose::Interarrival;
  std::uint64_t class_index = 0;   // 0-based
  std::uint64_t customer_index = 0;  // 1-based customer/step id
};

// Uniform on the open interval (0,1); salt distinguishes multiple uniforms
// derived from one key (e.g. the Box-Muller pair).
double uniform(const StreamKey& key, std::uint64_t salt = 0);

// Strictly positive unit-mean exponential.
double unit_exponential(const StreamKey& key, std::uint64_t salt = 0);

// Standard normal via Box-Muller on two keyed uniforms.
double standard_normal(const StreamKey& key);

// Unit-mean inter-arrival draw IA_i(j) following the class distribution.
double ia_draw(const Model& model, int cls, std::uint64_t seed, std::uint64_t replication, long j);

// Unit-exponential service requirement of customer (cls, j).
double workload(std::uint64_t seed, std::uint64_t replication, int cls, long j);

// Unit-exponential requirement of the k-th initially-in-service class customer.
double initial_workload(std::uint64_t seed, std::uint64_t replication, int cls, long k);

// Cumulative sums of IA_i(j)/lambda_i^n up to (and including) the last time
// <= horizon. Strictly increasing.
std::vector<double> arrival_times(const Model& model, int cls, long n, std::uint64_t seed,
                                  std::uint64_t replication, double horizon);

}  // namespace rng
}  // namespace htn
