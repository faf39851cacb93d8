#pragma once

#include <optional>
#include <string>
#include <vector>

#include "htn/trace.hpp"

namespace htn {

struct ScaledJoiner {
  long j = 0;
  double at = 0.0;
  long q_observed = 0;
  std::optional<double> wt_hat;  // sqrt(n) * WT, absent if wait censored
};

// Diffusion-scaled paths on the union grid of event times in [0, T]:
// Qhat = Q/sqrt(n), Rhat = R/sqrt(n), Psihat = (Psi - rho*n)/sqrt(n),
// Xhat = Qhat + Psihat, Bhat = (B - n*lambda*t)/sqrt(n). Bhat is sampled at
// event times (it drifts linearly in between); all others are exact step
// paths on this grid.
struct ScaledPath {
  long n = 0;
  double horizon = 0.0;
  std::vector<double> t;
  std::vector<std::vector<double>> qhat, rhat, psihat, xhat, bhat;  // [class][k]
  std::vector<std::vector<ScaledJoiner>> joiners;                   // at <= horizon
  std::vector<long> reneg_count;                                    // R_i(horizon)
};

ScaledPath scale(const EventTrace& trace, double horizon);

// Largest per-class snapshot-principle gap over joiners with AT <= horizon:
// gamma_i = max_j |Qhat_i(AT-) + 1/sqrt(n) - lambda_i * WThat_ij|. The
// +1/sqrt(n) counts the joiner itself in the queue it joins. Classes without
// joiners report 0.
std::vector<double> rsp_gap(const ScaledPath& scaled, const Model& model);

struct PayoffOutcome {
  enum class Case { Reneged, Joined, PostHorizon };
  Case kase = Case::PostHorizon;
  double value = 0.0;
};

// Cost of customer (cls, j), lower is better: r_i when reneging, h_i(WThat)
// when joining, 0 when arriving after the game horizon.
PayoffOutcome payoff(const EventTrace& trace, int cls, long j, double game_horizon);

// Payoff under the reference profile minus payoff under the deviation;
// the epsilon-Nash condition at (cls, j) is gap <= epsilon.
double nash_gap(const EventTrace& ref_trace, const EventTrace& dev_trace, int cls, long j,
                double game_horizon);

// Modulus of continuity w_T(f, window) of a piecewise-constant path given
// time-major values; exact via a breakpoint-pair scan.
double modulus(const std::vector<double>& t, const std::vector<std::vector<double>>& values,
               double window, double horizon);

// State-space-collapse diagnostic. FP: max_{i<N} sup_t Qhat_i. SLQ:
// sup_t max_i |Qhat_i - (1.Xhat)^+ / N|.
double ssc_metric(const ScaledPath& scaled, Policy policy);

std::string metrics_csv_header(int num_classes);
std::string metrics_csv_row(const EventTrace& trace, const ScaledPath& scaled, const Model& model);

}  // namespace htn
