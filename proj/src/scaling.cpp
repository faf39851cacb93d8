#include "htn/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "htn/errors.hpp"
#include "htn/io.hpp"

namespace htn {

namespace {
constexpr double kIdentityTol = 1e-6;  // covers float noise from sum(rho)*n vs n
}

ScaledPath scale(const EventTrace& trace, double horizon) {
  if (horizon > trace.end_time)
    throw EngineError("HorizonExceedsTrace", "trace ends at " + std::to_string(trace.end_time) +
                                                 " before the requested horizon");
  const Model& model = *trace.model;
  const int nc = model.num_classes();
  const double sqrt_n = std::sqrt(static_cast<double>(trace.n));

  std::set<double> grid_set{0.0, horizon};
  for (int i = 0; i < nc; ++i)
    for (double tt : trace.q[i].t)
      if (tt <= horizon) grid_set.insert(tt);
  for (int i = 0; i < nc; ++i) {
    for (double tt : trace.psi[i].t)
      if (tt <= horizon) grid_set.insert(tt);
    for (double tt : trace.b[i].t)
      if (tt <= horizon) grid_set.insert(tt);
    for (double tt : trace.r[i].t)
      if (tt <= horizon) grid_set.insert(tt);
  }

  ScaledPath sp;
  sp.n = trace.n;
  sp.horizon = horizon;
  sp.t.assign(grid_set.begin(), grid_set.end());
  const std::size_t k = sp.t.size();
  sp.qhat.assign(nc, std::vector<double>(k));
  sp.rhat.assign(nc, std::vector<double>(k));
  sp.psihat.assign(nc, std::vector<double>(k));
  sp.xhat.assign(nc, std::vector<double>(k));
  sp.bhat.assign(nc, std::vector<double>(k));
  sp.joiners.resize(nc);
  sp.reneg_count.resize(nc);

  for (int i = 0; i < nc; ++i) {
    const double lambda = model.cls(i).lambda;
    const double rho_n = model.rho(i) * static_cast<double>(trace.n);
    for (std::size_t s = 0; s < k; ++s) {
      const double tt = sp.t[s];
      sp.qhat[i][s] = static_cast<double>(trace.q[i].value_at(tt)) / sqrt_n;
      sp.rhat[i][s] = static_cast<double>(trace.r[i].value_at(tt)) / sqrt_n;
      sp.psihat[i][s] = (static_cast<double>(trace.psi[i].value_at(tt)) - rho_n) / sqrt_n;
      sp.xhat[i][s] = sp.qhat[i][s] + sp.psihat[i][s];
      sp.bhat[i][s] =
          (static_cast<double>(trace.b[i].value_at(tt)) - static_cast<double>(trace.n) * lambda * tt) /
          sqrt_n;
    }
    sp.reneg_count[i] = trace.r[i].value_at(horizon);
    for (const auto& rec : trace.customers[i]) {
      if (rec.at > horizon || rec.action != Action::Join) continue;
      ScaledJoiner joiner;
      joiner.j = rec.j;
      joiner.at = rec.at;
      joiner.q_observed = rec.q_observed;
      if (rec.wt) joiner.wt_hat = sqrt_n * (*rec.wt);
      sp.joiners[i].push_back(joiner);
    }
  }

  // Non-idling plus the critical load condition force 1.Qhat = (1.Xhat)^+.
  for (std::size_t s = 0; s < k; ++s) {
    double sum_q = 0.0, sum_x = 0.0;
    for (int i = 0; i < nc; ++i) {
      sum_q += sp.qhat[i][s];
      sum_x += sp.xhat[i][s];
    }
    if (std::abs(sum_q - std::max(sum_x, 0.0)) > kIdentityTol)
      throw EngineError("ScalingIdentityViolation",
                        "1.Qhat != (1.Xhat)^+ at t = " + std::to_string(sp.t[s]));
  }
  return sp;
}

std::vector<double> rsp_gap(const ScaledPath& scaled, const Model& model) {
  const double sqrt_n = std::sqrt(static_cast<double>(scaled.n));
  std::vector<double> gamma(model.num_classes(), 0.0);
  for (int i = 0; i < model.num_classes(); ++i) {
    const double lambda = model.cls(i).lambda;
    for (const auto& joiner : scaled.joiners[i]) {
      if (!joiner.wt_hat)
        throw EngineError("CensoredWait", "joiner (" + std::to_string(i + 1) + "," +
                                              std::to_string(joiner.j) + ") lacks a waiting time");
      const double queue_seen = (static_cast<double>(joiner.q_observed) + 1.0) / sqrt_n;
      gamma[i] = std::max(gamma[i], std::abs(queue_seen - lambda * (*joiner.wt_hat)));
    }
  }
  return gamma;
}

PayoffOutcome payoff(const EventTrace& trace, int cls, long j, double game_horizon) {
  if (game_horizon > trace.t_end)
    throw EngineError("HorizonExceedsTrace", "game horizon exceeds the simulated horizon");
  const Model& model = *trace.model;
  PayoffOutcome out;
  if (j > static_cast<long>(trace.customers[cls].size())) {
    // Never arrived within the simulated span, hence AT > t_end >= game horizon.
    out.kase = PayoffOutcome::Case::PostHorizon;
    out.value = 0.0;
    return out;
  }
  const CustomerRecord& rec = trace.customers[cls][j - 1];
  if (rec.at > game_horizon) {
    out.kase = PayoffOutcome::Case::PostHorizon;
    out.value = 0.0;
    return out;
  }
  if (rec.action == Action::Leave) {
    out.kase = PayoffOutcome::Case::Reneged;
    out.value = model.cls(cls).r;
    return out;
  }
  if (!rec.wt)
    throw EngineError("CensoredWait", "pre-horizon joiner (" + std::to_string(cls + 1) + "," +
                                          std::to_string(j) + ") lacks a waiting time");
  out.kase = PayoffOutcome::Case::Joined;
  out.value = model.cls(cls).hazard(std::sqrt(static_cast<double>(trace.n)) * (*rec.wt));
  return out;
}

double nash_gap(const EventTrace& ref_trace, const EventTrace& dev_trace, int cls, long j,
                double game_horizon) {
  return payoff(ref_trace, cls, j, game_horizon).value -
         payoff(dev_trace, cls, j, game_horizon).value;
}

double modulus(const std::vector<double>& t, const std::vector<std::vector<double>>& values,
               double window, double horizon) {
  if (!(window > 0.0) || window > horizon)
    throw ValidationError("NonPositiveParam", "modulus window must lie in (0, horizon]");
  const std::size_t k = t.size();
  auto dist = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t c = 0; c < values[a].size(); ++c) {
      const double diff = values[a][c] - values[b][c];
      s += diff * diff;
    }
    return std::sqrt(s);
  };
  // A pair of segments (a, b), a < b, admits times s in segment a and
  // u in segment b with u - s <= window iff t[b] - t[a+1] < window,
  // s <= horizon - window and t[b] <= horizon.
  double best = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    if (t[a] > horizon - window) break;
    for (std::size_t b = a + 1; b < k && t[b] <= horizon; ++b) {
      if (!(t[b] - t[a + 1] < window)) break;
      best = std::max(best, dist(a, b));
    }
  }
  return best;
}

double ssc_metric(const ScaledPath& scaled, Policy policy) {
  const int nc = static_cast<int>(scaled.qhat.size());
  double out = 0.0;
  if (policy == Policy::FP) {
    for (int i = 0; i + 1 < nc; ++i)
      for (double v : scaled.qhat[i]) out = std::max(out, v);
    return out;
  }
  for (std::size_t s = 0; s < scaled.t.size(); ++s) {
    double sum_x = 0.0;
    for (int i = 0; i < nc; ++i) sum_x += scaled.xhat[i][s];
    const double target = std::max(sum_x, 0.0) / static_cast<double>(nc);
    for (int i = 0; i < nc; ++i) out = std::max(out, std::abs(scaled.qhat[i][s] - target));
  }
  return out;
}

std::string metrics_csv_header(int num_classes) {
  std::ostringstream out;
  out << "n,policy,scenario,replication";
  for (int i = 1; i <= num_classes; ++i) out << ",gamma_" << i;
  out << ",ssc";
  for (int i = 1; i <= num_classes; ++i) out << ",max_Qhat_" << i;
  for (int i = 1; i <= num_classes; ++i) out << ",reneg_count_" << i;
  out << '\n';
  return out.str();
}

std::string metrics_csv_row(const EventTrace& trace, const ScaledPath& scaled, const Model& model) {
  const int nc = model.num_classes();
  std::ostringstream out;
  out << trace.n << ',' << policy_name(trace.policy) << ',' << trace.scenario.name() << ','
      << trace.replication;
  const auto gamma = rsp_gap(scaled, model);
  for (int i = 0; i < nc; ++i) out << ',' << fmt17(gamma[i]);
  out << ',' << fmt17(ssc_metric(scaled, trace.policy));
  for (int i = 0; i < nc; ++i)
    out << ',' << fmt17(*std::max_element(scaled.qhat[i].begin(), scaled.qhat[i].end()));
  for (int i = 0; i < nc; ++i) out << ',' << scaled.reneg_count[i];
  out << '\n';
  return out.str();
}

}  // namespace htn
