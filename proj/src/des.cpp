#include "htn/des.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

#include "htn/errors.hpp"
#include "htn/rng.hpp"

namespace htn {

std::optional<int> next_class_fp(const std::vector<long>& queues) {
  for (std::size_t i = 0; i < queues.size(); ++i)
    if (queues[i] > 0) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> next_class_slq(const std::vector<long>& queues) {
  long best = 0;
  std::optional<int> pick;
  for (std::size_t i = 0; i < queues.size(); ++i) {
    if (queues[i] > best) {
      best = queues[i];
      pick = static_cast<int>(i);
    }
  }
  return pick;
}

namespace {

// Deterministic total order on simultaneous events: departures before
// arrivals, departures by ascending server id, arrivals by ascending class.
struct PendingEvent {
  double t;
  int tier;  // 0 departure, 1 arrival
  long tie;  // server id or class index
  EventKind kind;
  int cls;
  long j;      // arrival index; 0 for initial customers
  int server;  // departure only

  bool operator>(const PendingEvent& o) const {
    if (t != o.t) return t > o.t;
    if (tier != o.tier) return tier > o.tier;
    return tie > o.tie;
  }
};

class Engine {
 public:
  Engine(const Model& model, Policy policy, const Scenario& scenario, long n, double t_end,
         std::uint64_t seed, std::uint64_t replication, const RunOptions& options)
      : model_(model),
        policy_(policy),
        scenario_(scenario),
        n_(n),
        t_end_(t_end),
        seed_(seed),
        replication_(replication),
        options_(options),
        nc_(model.num_classes()) {}

  EventTrace run() {
    init_state();
    const double drain_cap = t_end_ * options_.drain_cap_factor;
    double clock = 0.0;
    while (!events_.empty()) {
      const PendingEvent ev = events_.top();
      if (ev.t > t_end_ && pending_pre_horizon_ == 0) break;
      if (ev.t > drain_cap && pending_pre_horizon_ > 0)
        throw EngineError("DrainTimeout",
                          "pre-horizon joiners still unrouted at t = " + std::to_string(ev.t));
      events_.pop();
      clock = ev.t;
      if (ev.kind == EventKind::Arrival)
        handle_arrival(ev);
      else
        handle_departure(ev);
    }
    trace_.end_time = std::max(clock, t_end_);
    return std::move(trace_);
  }

 private:
  void init_state() {
    trace_.model = std::make_shared<Model>(model_);
    trace_.n = n_;
    trace_.policy = policy_;
    trace_.scenario = scenario_;
    trace_.seed = seed_;
    trace_.replication = replication_;
    trace_.t_end = t_end_;
    trace_.customers.resize(nc_);
    trace_.q0.assign(nc_, 0);
    trace_.psi0.assign(nc_, 0);
    trace_.e.resize(nc_);
    trace_.jn.resize(nc_);
    trace_.r.resize(nc_);
    trace_.b.resize(nc_);
    trace_.d.resize(nc_);
    trace_.q.resize(nc_);
    trace_.psi.resize(nc_);

    e_.assign(nc_, 0);
    jn_.assign(nc_, 0);
    r_.assign(nc_, 0);
    b_.assign(nc_, 0);
    d_.assign(nc_, 0);
    q_.assign(nc_, 0);
    psi_.assign(nc_, 0);
    buffers_.assign(nc_, {});
    busy_ = 0;
    next_arrival_cum_.assign(nc_, 0.0);
    pending_pre_horizon_ = 0;

    int server = 0;
    if (options_.init == RunOptions::Init::Stationary) {
      for (int i = 0; i < nc_; ++i) {
        const long count = static_cast<long>(std::floor(model_.rho(i) * static_cast<double>(n_)));
        trace_.psi0[i] = count;
        psi_[i] = count;
        busy_ += count;
        for (long k = 1; k <= count; ++k) {
          const double w = options_.initial_workload_override
                               ? options_.initial_workload_override(i, k)
                               : rng::initial_workload(seed_, replication_, i, k);
          events_.push({w / model_.cls(i).mu, 0, server, EventKind::Departure, i, 0, server});
          ++server;
        }
      }
    }
    for (; server < n_; ++server) free_servers_.push(server);

    for (int i = 0; i < nc_; ++i) {
      trace_.e[i].append(0.0, 0);
      trace_.jn[i].append(0.0, 0);
      trace_.r[i].append(0.0, 0);
      trace_.b[i].append(0.0, 0);
      trace_.d[i].append(0.0, 0);
      trace_.q[i].append(0.0, trace_.q0[i]);
      trace_.psi[i].append(0.0, trace_.psi0[i]);
      push_arrival(i, 1);
    }
  }

  void handle_arrival(const PendingEvent& ev) { process_arrival(ev.cls, ev.j, ev.t); }

  void process_arrival(int cls, long j, double t) {
    const long q_obs = q_[cls];
    const bool rule_join = model_.join_decision(cls, q_obs, n_);
    const bool is_dev =
        scenario_.is_deviator() && scenario_.cls == cls && scenario_.j == j;
    const bool join = is_dev ? !rule_join : rule_join;

    CustomerRecord rec;
    rec.cls = cls;
    rec.j = j;
    rec.at = t;
    rec.q_observed = q_obs;
    rec.action = join ? Action::Join : Action::Leave;
    rec.post_horizon = t > t_end_;

    Event out;
    out.t = t;
    out.kind = EventKind::Arrival;
    out.cls = cls;
    out.j = j;
    out.action = rec.action;

    ++e_[cls];
    if (!join) {
      ++r_[cls];
    } else {
      ++jn_[cls];
      if (busy_ < n_) {
        out.immediate_route = true;
        rec.rt = t;
        rec.wt = 0.0;
        start_service(cls, j, t);
      } else {
        buffers_[cls].push_back(j);
        ++q_[cls];
        if (t <= t_end_) ++pending_pre_horizon_;
      }
    }
    trace_.customers[cls].push_back(rec);
    trace_.events.push_back(out);
    record_paths(t);

    // Lazy generation: the j+1st arrival of this class.
    push_arrival(cls, j + 1);
  }

  void handle_departure(const PendingEvent& ev) {
    Event out;
    out.t = ev.t;
    out.kind = EventKind::Departure;
    out.cls = ev.cls;
    out.j = ev.j;
    out.server = ev.server;

    ++d_[ev.cls];
    --psi_[ev.cls];
    --busy_;
    free_servers_.push(ev.server);

    const auto pick = policy_ == Policy::FP ? next_class_fp(q_) : next_class_slq(q_);
    if (pick) {
      const int k = *pick;
      const long j = buffers_[k].front();
      buffers_[k].pop_front();
      --q_[k];
      out.routed = true;
      out.routed_cls = k;
      out.routed_j = j;
      CustomerRecord& rec = trace_.customers[k][j - 1];
      rec.rt = ev.t;
      rec.wt = ev.t - rec.at;
      if (rec.at <= t_end_) --pending_pre_horizon_;
      start_service(k, j, ev.t);
    }
    trace_.events.push_back(out);
    record_paths(ev.t);
  }

  void start_service(int cls, long j, double t) {
    const double w = options_.workload_override ? options_.workload_override(cls, j)
                                                : rng::workload(seed_, replication_, cls, j);
    const int server = free_servers_.top();
    free_servers_.pop();
    ++b_[cls];
    ++psi_[cls];
    ++busy_;
    events_.push({t + w / model_.cls(cls).mu, 0, server, EventKind::Departure, cls, j, server});
  }

  void push_arrival(int cls, long j) {
    next_arrival_cum_[cls] += rng::ia_draw(model_, cls, seed_, replication_, j) / rate_[cls];
    events_.push({next_arrival_cum_[cls], 1, cls, EventKind::Arrival, cls, j, -1});
  }

  void record_paths(double t) {
    for (int i = 0; i < nc_; ++i) {
      trace_.e[i].append(t, e_[i]);
      trace_.jn[i].append(t, jn_[i]);
      trace_.r[i].append(t, r_[i]);
      trace_.b[i].append(t, b_[i]);
      trace_.d[i].append(t, d_[i]);
      trace_.q[i].append(t, q_[i]);
      trace_.psi[i].append(t, psi_[i]);
    }
  }

 public:
  void prepare() {
    rate_.resize(nc_);
    for (int i = 0; i < nc_; ++i) rate_[i] = model_.arrival_rate_n(i, n_);
  }

 private:
  const Model& model_;
  Policy policy_;
  Scenario scenario_;
  long n_;
  double t_end_;
  std::uint64_t seed_;
  std::uint64_t replication_;
  RunOptions options_;
  int nc_;

  EventTrace trace_;
  std::priority_queue<PendingEvent, std::vector<PendingEvent>, std::greater<PendingEvent>> events_;
  std::priority_queue<int, std::vector<int>, std::greater<int>> free_servers_;
  std::vector<std::deque<long>> buffers_;
  std::vector<long> e_, jn_, r_, b_, d_, q_, psi_;
  std::vector<double> rate_, next_arrival_cum_;
  long busy_ = 0;
  long pending_pre_horizon_ = 0;
};

}  // namespace

EventTrace run(const Model& model, Policy policy, const Scenario& scenario, long n, double t_end,
               std::uint64_t seed, std::uint64_t replication, const RunOptions& options) {
  if (n < 1) throw ValidationError("NonPositiveParam", "n must be >= 1");
  if (!(t_end > 0.0)) throw ValidationError("NonPositiveParam", "horizon must be positive");
  if (policy == Policy::SLQ) model.require_slq_ordering();
  if (scenario.is_deviator() &&
      (scenario.cls < 0 || scenario.cls >= model.num_classes() || scenario.j < 1))
    throw ValidationError("ConfigSchemaError", "deviator must name a valid (class, arrival index)");
  Engine engine(model, policy, scenario, n, t_end, seed, replication, options);
  engine.prepare();
  return engine.run();
}

std::pair<EventTrace, EventTrace> run_coupled(const Model& model, Policy policy, long n,
                                              double t_end, std::uint64_t seed,
                                              std::uint64_t replication, int deviator_cls,
                                              long deviator_j, const RunOptions& options) {
  EventTrace reference = run(model, policy, Scenario::reference(), n, t_end, seed, replication, options);
  long arrivals_by_horizon = 0;
  for (const auto& rec : reference.customers[deviator_cls])
    if (rec.at <= t_end) ++arrivals_by_horizon;
  if (arrivals_by_horizon < deviator_j)
    throw EngineError("DeviatorNotArrived",
                      "only " + std::to_string(arrivals_by_horizon) + " class-" +
                          std::to_string(deviator_cls + 1) + " arrivals by the horizon");
  EventTrace deviator = run(model, policy, Scenario::deviator(deviator_cls, deviator_j), n, t_end,
                            seed, replication, options);
  return {std::move(reference), std::move(deviator)};
}

}  // namespace htn
