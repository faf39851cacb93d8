#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "htn/model.hpp"

namespace htn {

// Either the reference dynamics (every customer plays the threshold rule) or
// the dynamics where exactly one customer (cls, j) plays its negation.
struct Scenario {
  enum class Kind { Reference, Deviator };
  Kind kind = Kind::Reference;
  int cls = 0;  // 0-based, deviator only
  long j = 0;   // 1-based arrival index, deviator only

  static Scenario reference() { return {}; }
  static Scenario deviator(int cls, long j) { return {Kind::Deviator, cls, j}; }
  bool is_deviator() const { return kind == Kind::Deviator; }
  std::string name() const;  // "ref" or "dev:i:j" (1-based class)
};

enum class Action { Join, Leave };

struct CustomerRecord {
  int cls = 0;  // 0-based
  long j = 0;   // 1-based within class, arrival order
  double at = 0.0;
  long q_observed = 0;
  Action action = Action::Join;
  std::optional<double> rt;  // routing time, absent if never routed
  std::optional<double> wt;  // rt - at, joiners only
  bool post_horizon = false; // at > game horizon
};

enum class EventKind { Arrival, Departure };

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::Arrival;
  int cls = 0;
  long j = 0;  // 0 for initially-in-service customers
  // arrival fields
  Action action = Action::Join;
  bool immediate_route = false;
  // departure fields
  int server = -1;
  bool routed = false;  // freed server admitted a waiting customer
  int routed_cls = 0;
  long routed_j = 0;
};

// Piecewise-constant cadlag count path: value v[k] holds on [t[k], t[k+1]).
struct StepSeries {
  std::vector<double> t;
  std::vector<long> v;

  void append(double time, long value);
  long value_at(double time) const;  // last value with t <= time
};

struct EventTrace {
  std::shared_ptr<const Model> model;
  long n = 0;
  Policy policy = Policy::FP;
  Scenario scenario;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  double t_end = 0.0;    // game horizon passed to run()
  double end_time = 0.0; // >= t_end; paths are constant afterwards

  std::vector<long> q0, psi0;  // initial condition
  std::vector<Event> events;
  std::vector<std::vector<CustomerRecord>> customers;  // per class, index j-1
  // Per-class count paths (Eq-level balance holds exactly in integers).
  std::vector<StepSeries> e, jn, r, b, d, q, psi;
};

// State snapshot used by replay consumers (verification, CSV export).
struct ReplayState {
  std::vector<long> e, jn, r, b, d, q, psi;
  long busy = 0;
};

// Replays the event log from the initial condition, invoking the callback
// with the pre- and post-event state. Pre-state queues are the pre-routing
// vector Q(t-) used by the scheduling-legality checks.
void replay_trace(const EventTrace& trace,
                  const std::function<void(const Event&, const ReplayState& pre,
                                           const ReplayState& post)>& cb);

struct InvariantReport {
  long events_checked = 0;
  long violations = 0;
  std::vector<std::string> messages;  // capped
  bool ok() const { return violations == 0; }
};

// Independent pass over a finished trace: balance equations, non-idling,
// routing legality for the policy, threshold ceilings, decision-rule
// conformance, record consistency and path agreement with the event log.
InvariantReport verify_trace(const EventTrace& trace);

// CSV exports with fixed 17-significant-digit formatting.
std::string trace_csv(const EventTrace& trace);
std::string customers_csv(const EventTrace& trace);

}  // namespace htn
