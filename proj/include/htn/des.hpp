#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "htn/trace.hpp"

namespace htn {

// Freed-server class selection on the pre-routing queue vector.
// FP: least index among non-empty buffers. SLQ: lowest index among the
// longest queues (fixed tie-break). Empty system -> nullopt.
std::optional<int> next_class_fp(const std::vector<long>& queues);
std::optional<int> next_class_slq(const std::vector<long>& queues);

struct RunOptions {
  enum class Init { Stationary, Empty };
  // Stationary: Q(0) = 0, Psi_i(0) = floor(rho_i * n), remaining servers idle.
  Init init = Init::Stationary;
  // Routing of pre-horizon joiners must finish by t_end * drain_cap_factor.
  double drain_cap_factor = 10.0;
  // Test hooks replacing the keyed unit-exponential workloads.
  std::function<double(int cls, long j)> workload_override;
  std::function<double(int cls, long k)> initial_workload_override;
};

// Simulates the n-server system on [0, t_end] and through the drain period:
// arrivals beyond t_end still occur (flagged post-horizon) and the run ends
// once every customer who joined by t_end has been routed. Deterministic in
// all arguments. Throws DrainTimeout if the drain cap is exceeded.
EventTrace run(const Model& model, Policy policy, const Scenario& scenario, long n, double t_end,
               std::uint64_t seed, std::uint64_t replication, const RunOptions& options = {});

// Reference and deviator dynamics on identical stochastic primitives. Throws
// DeviatorNotArrived if fewer than j class-i arrivals occur by t_end; the
// caller treats the payoff difference as zero in that case.
std::pair<EventTrace, EventTrace> run_coupled(const Model& model, Policy policy, long n,
                                              double t_end, std::uint64_t seed,
                                              std::uint64_t replication, int deviator_cls,
                                              long deviator_j, const RunOptions& options = {});

}  // namespace htn
