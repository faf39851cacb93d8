#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "htn/model.hpp"

namespace htn {

enum class SdeKind { FP, SLQ };

// Limit drifts. FP: b(y) = -(mu_1 y_1, ..., mu_{N-1} y_{N-1},
// mu_N (y_N - (1.y)^+)). SLQ: b_i(y) = -mu_i (y_i - (1.y)^+ / N).
std::vector<double> drift_fp(const std::vector<double>& y, const std::vector<double>& mu);
std::vector<double> drift_slq(const std::vector<double>& y, const std::vector<double>& mu);

// Constraint level of the domain {1.y <= bound}: theta_N for FP and
// N*theta_N for SLQ (the latter requires M = N).
double sde_bound(SdeKind kind, const Model& model);

struct SdeOptions {
  bool zero_noise = false;  // A = 0: drift and reflection only
  std::optional<std::vector<double>> lambda_hat_override;
};

// Driving-noise increment over dt: mean lambda_hat*dt, covariance
// dt * diag(lambda_i (C^2_IA_i + 1)). normals supplies one standard normal
// per coordinate.
std::vector<double> bm_increment(const Model& model, double dt,
                                 const std::function<double(int coord)>& normals,
                                 const SdeOptions& options = {});

struct SdePath {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<std::vector<double>> x;  // time-major
  std::vector<double> l;               // cumulative regulator
};

// Euler step plus one-step Skorohod correction in -e_N at the bound; on the
// grid this coincides with applying the whole-path map to the unreflected
// increments. Deterministic per (seed, path index).
std::vector<SdePath> simulate_sde(SdeKind kind, const Model& model, const std::vector<double>& x0,
                                  double dt, double horizon, std::uint64_t seed, int n_paths,
                                  const SdeOptions& options = {}, int workers = 1);

// Streams paths and keeps only X(t*) per requested time: samples[coord][time]
// is one value per path. Used for distribution comparisons.
std::vector<std::vector<std::vector<double>>> sde_marginal_samples(
    SdeKind kind, const Model& model, const std::vector<double>& x0, double dt, double horizon,
    std::uint64_t seed, int n_paths, const std::vector<double>& times,
    const SdeOptions& options = {}, int workers = 1);

// Limit-level queue/idleness reconstruction. FP: Q = (1.X)^+ e_N;
// SLQ: Q_i = (1.X)^+ / N. Psi = X - Q pointwise.
std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>> limit_queues(
    const std::vector<std::vector<double>>& x, SdeKind kind);

std::string sde_csv(const std::vector<SdePath>& paths, SdeKind kind);

}  // namespace htn
