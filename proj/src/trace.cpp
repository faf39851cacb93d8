#include "htn/trace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "htn/io.hpp"

namespace htn {

std::string Scenario::name() const {
  if (kind == Kind::Reference) return "ref";
  return "dev:" + std::to_string(cls + 1) + ":" + std::to_string(j);
}

void StepSeries::append(double time, long value) {
  if (!t.empty() && time == t.back()) {
    v.back() = value;
    if (v.size() >= 2 && v[v.size() - 2] == value) {
      t.pop_back();
      v.pop_back();
    }
    return;
  }
  if (!t.empty() && v.back() == value) return;
  t.push_back(time);
  v.push_back(value);
}

long StepSeries::value_at(double time) const {
  auto it = std::upper_bound(t.begin(), t.end(), time);
  if (it == t.begin()) return v.empty() ? 0 : v.front();
  return v[static_cast<std::size_t>(it - t.begin()) - 1];
}

namespace {

void apply_event(const Event& ev, ReplayState& st) {
  if (ev.kind == EventKind::Arrival) {
    ++st.e[ev.cls];
    if (ev.action == Action::Leave) {
      ++st.r[ev.cls];
    } else {
      ++st.jn[ev.cls];
      if (ev.immediate_route) {
        ++st.b[ev.cls];
        ++st.psi[ev.cls];
        ++st.busy;
      } else {
        ++st.q[ev.cls];
      }
    }
  } else {
    ++st.d[ev.cls];
    --st.psi[ev.cls];
    --st.busy;
    if (ev.routed) {
      --st.q[ev.routed_cls];
      ++st.b[ev.routed_cls];
      ++st.psi[ev.routed_cls];
      ++st.busy;
    }
  }
}

}  // namespace

void replay_trace(const EventTrace& trace,
                  const std::function<void(const Event&, const ReplayState& pre,
                                           const ReplayState& post)>& cb) {
  const std::size_t nc = trace.q0.size();
  ReplayState st;
  st.e.assign(nc, 0);
  st.jn.assign(nc, 0);
  st.r.assign(nc, 0);
  st.b.assign(nc, 0);
  st.d.assign(nc, 0);
  st.q = trace.q0;
  st.psi = trace.psi0;
  st.busy = 0;
  for (auto p : st.psi) st.busy += p;

  ReplayState pre;
  for (const auto& ev : trace.events) {
    pre = st;
    apply_event(ev, st);
    cb(ev, pre, st);
  }
}

InvariantReport verify_trace(const EventTrace& trace) {
  InvariantReport report;
  const Model& model = *trace.model;
  const int nc = model.num_classes();
  const double sqrt_n = std::sqrt(static_cast<double>(trace.n));
  const double ceiling_slack = trace.scenario.is_deviator() ? 2.0 : 1.0;
  const double tol = 1e-9;

  auto fail = [&](double t, const std::string& msg) {
    ++report.violations;
    if (report.messages.size() < 16)
      report.messages.push_back("t=" + fmt17(t) + ": " + msg);
  };

  // Rebuilt count paths must agree with the recorded ones bit for bit.
  std::vector<StepSeries> e(nc), jn(nc), r(nc), b(nc), d(nc), q(nc), psi(nc);
  for (int i = 0; i < nc; ++i) {
    e[i].append(0.0, 0);
    jn[i].append(0.0, 0);
    r[i].append(0.0, 0);
    b[i].append(0.0, 0);
    d[i].append(0.0, 0);
    q[i].append(0.0, trace.q0[i]);
    psi[i].append(0.0, trace.psi0[i]);
  }

  double last_t = 0.0;
  replay_trace(trace, [&](const Event& ev, const ReplayState& pre, const ReplayState& post) {
    ++report.events_checked;
    if (ev.t < last_t) fail(ev.t, "event times not nondecreasing");
    last_t = ev.t;

    for (int i = 0; i < nc; ++i) {
      e[i].append(ev.t, post.e[i]);
      jn[i].append(ev.t, post.jn[i]);
      r[i].append(ev.t, post.r[i]);
      b[i].append(ev.t, post.b[i]);
      d[i].append(ev.t, post.d[i]);
      q[i].append(ev.t, post.q[i]);
      psi[i].append(ev.t, post.psi[i]);
    }

    // Balance identities, exactly in integers.
    long total_q = 0, total_psi = 0;
    for (int i = 0; i < nc; ++i) {
      if (post.q[i] != trace.q0[i] + post.e[i] - post.b[i] - post.r[i])
        fail(ev.t, "queue balance violated (class " + std::to_string(i + 1) + ")");
      if (post.psi[i] != trace.psi0[i] + post.b[i] - post.d[i])
        fail(ev.t, "service balance violated (class " + std::to_string(i + 1) + ")");
      if (post.jn[i] != post.e[i] - post.r[i])
        fail(ev.t, "join/renege split violated (class " + std::to_string(i + 1) + ")");
      if (post.q[i] < 0) fail(ev.t, "negative queue");
      if (post.psi[i] < 0) fail(ev.t, "negative in-service count");
      total_q += post.q[i];
      total_psi += post.psi[i];
    }
    if (total_psi != post.busy) fail(ev.t, "busy count out of sync");
    if (total_psi > trace.n) fail(ev.t, "more than n servers busy");
    if (total_q > 0 && total_psi != trace.n) fail(ev.t, "non-idling violated");

    // Threshold ceiling, Q_i <= sqrt(n)*theta_i + 1 (reference) or + 2 (deviator).
    for (int i = 0; i < nc; ++i) {
      if (static_cast<double>(post.q[i]) > sqrt_n * model.theta(i) + ceiling_slack + tol)
        fail(ev.t, "threshold ceiling exceeded (class " + std::to_string(i + 1) + ")");
    }

    if (ev.kind == EventKind::Arrival) {
      if (ev.j < 1 || ev.j > static_cast<long>(trace.customers[ev.cls].size())) {
        fail(ev.t, "arrival without customer record");
        return;
      }
      const CustomerRecord& rec = trace.customers[ev.cls][ev.j - 1];
      if (rec.q_observed != pre.q[ev.cls]) fail(ev.t, "recorded observed queue differs from Q(AT-)");
      const bool rule_join = model.join_decision(ev.cls, pre.q[ev.cls], trace.n);
      const bool is_dev = trace.scenario.is_deviator() && trace.scenario.cls == ev.cls &&
                          trace.scenario.j == ev.j;
      const bool expect_join = is_dev ? !rule_join : rule_join;
      if ((ev.action == Action::Join) != expect_join) fail(ev.t, "decision rule violated");
      if (ev.action == Action::Join) {
        if (ev.immediate_route && pre.busy >= trace.n) fail(ev.t, "immediate route with all servers busy");
        if (!ev.immediate_route && pre.busy < trace.n) fail(ev.t, "joiner queued while servers idle");
      }
    } else if (ev.routed) {
      // Scheduling legality against the pre-routing queue vector.
      if (pre.q[ev.routed_cls] <= 0) fail(ev.t, "routed from an empty buffer");
      if (trace.policy == Policy::FP) {
        for (int k = 0; k < ev.routed_cls; ++k)
          if (pre.q[k] > 0) fail(ev.t, "FP routing skipped a higher-priority buffer");
      } else {
        const long mx = *std::max_element(pre.q.begin(), pre.q.end());
        if (pre.q[ev.routed_cls] != mx) fail(ev.t, "SLQ routing did not pick a longest queue");
      }
    }
  });

  auto series_equal = [](const StepSeries& a, const StepSeries& bb) {
    return a.t == bb.t && a.v == bb.v;
  };
  for (int i = 0; i < nc; ++i) {
    if (!series_equal(e[i], trace.e[i]) || !series_equal(jn[i], trace.jn[i]) ||
        !series_equal(r[i], trace.r[i]) || !series_equal(b[i], trace.b[i]) ||
        !series_equal(d[i], trace.d[i]) || !series_equal(q[i], trace.q[i]) ||
        !series_equal(psi[i], trace.psi[i]))
      fail(trace.end_time, "recorded paths disagree with event replay (class " + std::to_string(i + 1) + ")");
  }

  // Customer-record consistency and the drain guarantee.
  for (int i = 0; i < nc; ++i) {
    for (const auto& rec : trace.customers[i]) {
      if (rec.action == Action::Leave && (rec.rt || rec.wt)) fail(rec.at, "reneger with routing time");
      if (rec.action == Action::Join && rec.rt) {
        if (!rec.wt || *rec.wt != *rec.rt - rec.at) fail(rec.at, "waiting time inconsistent");
        if (*rec.wt < 0.0) fail(rec.at, "negative waiting time");
      }
      if (rec.post_horizon != (rec.at > trace.t_end)) fail(rec.at, "post-horizon flag wrong");
      if (rec.action == Action::Join && rec.at <= trace.t_end && !rec.rt)
        fail(rec.at, "pre-horizon joiner was never routed");
    }
  }
  return report;
}

std::string trace_csv(const EventTrace& trace) {
  const int nc = static_cast<int>(trace.q0.size());
  std::ostringstream out;
  out << "t,event_kind,class,j";
  for (int i = 1; i <= nc; ++i) out << ",Q_" << i;
  for (int i = 1; i <= nc; ++i) out << ",Psi_" << i;
  out << ",busy\n";
  replay_trace(trace, [&](const Event& ev, const ReplayState&, const ReplayState& post) {
    out << fmt17(ev.t) << ',' << (ev.kind == EventKind::Arrival ? "arrival" : "departure") << ','
        << (ev.cls + 1) << ',' << ev.j;
    for (int i = 0; i < nc; ++i) out << ',' << post.q[i];
    for (int i = 0; i < nc; ++i) out << ',' << post.psi[i];
    out << ',' << post.busy << '\n';
  });
  return out.str();
}

std::string customers_csv(const EventTrace& trace) {
  std::ostringstream out;
  out << "i,j,AT,q_observed,action,RT,WT,post_horizon\n";
  for (const auto& per_class : trace.customers) {
    for (const auto& rec : per_class) {
      out << (rec.cls + 1) << ',' << rec.j << ',' << fmt17(rec.at) << ',' << rec.q_observed << ','
          << (rec.action == Action::Join ? "join" : "leave") << ','
          << (rec.rt ? fmt17(*rec.rt) : "") << ',' << (rec.wt ? fmt17(*rec.wt) : "") << ','
          << (rec.post_horizon ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

}  // namespace htn
