#include "htn/sde.hpp"

#include <cmath>
#include <sstream>

#include "htn/errors.hpp"
#include "htn/io.hpp"
#include "htn/parallel.hpp"
#include "htn/rng.hpp"

namespace htn {

namespace {

double coord_sum(const std::vector<double>& y) {
  double s = 0.0;
  for (double v : y) s += v;
  return s;
}

struct Stepper {
  SdeKind kind;
  const Model& model;
  std::vector<double> x0;
  double dt;
  long steps;
  std::uint64_t seed;
  SdeOptions options;
  double bound;
  std::vector<double> mu;

  // Visits (k, t_k, x_k, l_k) for k = 0..steps.
  template <typename Sink>
  void integrate(int path_index, Sink&& sink) const {
    std::vector<double> x = x0;
    std::vector<double> drift, dw;
    double l = 0.0;
    sink(0L, 0.0, x, l);
    for (long k = 0; k < steps; ++k) {
      drift = kind == SdeKind::FP ? drift_fp(x, mu) : drift_slq(x, mu);
      dw = bm_increment(model, dt,
                        [&](int coord) {
                          return rng::standard_normal(
                              {seed, static_cast<std::uint64_t>(path_index), rng::Purpose::Gauss,
                               static_cast<std::uint64_t>(coord), static_cast<std::uint64_t>(k + 1)});
                        },
                        options);
      double sum = 0.0;
      for (std::size_t c = 0; c < x.size(); ++c) {
        x[c] += drift[c] * dt + dw[c];
        sum += x[c];
      }
      const double push = std::max(sum - bound, 0.0);
      if (push > 0.0) {
        x.back() -= push;
        l += push;
      }
      sink(k + 1, static_cast<double>(k + 1) * dt, x, l);
    }
  }
};

Stepper make_stepper(SdeKind kind, const Model& model, const std::vector<double>& x0, double dt,
                     double horizon, std::uint64_t seed, const SdeOptions& options) {
  if (!(dt > 0.0) || !(horizon > 0.0))
    throw ValidationError("NonPositiveParam", "dt and horizon must be positive");
  if (static_cast<int>(x0.size()) != model.num_classes())
    throw ValidationError("InvalidStart", "x0 dimension mismatch");
  const double bound = sde_bound(kind, model);
  if (coord_sum(x0) > bound + 1e-12)
    throw ValidationError("InvalidStart", "1.x0 exceeds the domain bound");
  std::vector<double> mu(model.num_classes());
  for (int i = 0; i < model.num_classes(); ++i) mu[i] = model.cls(i).mu;
  const long steps = std::lround(horizon / dt);
  return Stepper{kind, model, x0, dt, steps, seed, options, bound, std::move(mu)};
}

}  // namespace

std::vector<double> drift_fp(const std::vector<double>& y, const std::vector<double>& mu) {
  std::vector<double> b(y.size());
  for (std::size_t i = 0; i + 1 < y.size(); ++i) b[i] = -mu[i] * y[i];
  b.back() = -mu.back() * (y.back() - std::max(coord_sum(y), 0.0));
  return b;
}

std::vector<double> drift_slq(const std::vector<double>& y, const std::vector<double>& mu) {
  const double avg_pos = std::max(coord_sum(y), 0.0) / static_cast<double>(y.size());
  std::vector<double> b(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) b[i] = -mu[i] * (y[i] - avg_pos);
  return b;
}

double sde_bound(SdeKind kind, const Model& model) {
  const double theta_n = model.theta(model.num_classes() - 1);
  if (kind == SdeKind::FP) return theta_n;
  model.require_slq_ordering();
  if (model.m() != model.num_classes())
    throw EngineError("SlqLimitUndefined",
                      "the SLQ limit is identified only for a unique minimal theta (M = N)");
  return static_cast<double>(model.num_classes()) * theta_n;
}

std::vector<double> bm_increment(const Model& model, double dt,
                                 const std::function<double(int coord)>& normals,
                                 const SdeOptions& options) {
  std::vector<double> out(model.num_classes());
  for (int i = 0; i < model.num_classes(); ++i) {
    const double lambda_hat = options.lambda_hat_override ? (*options.lambda_hat_override)[i]
                                                          : model.cls(i).lambda_hat;
    out[i] = lambda_hat * dt;
    if (!options.zero_noise) {
      const double var = model.cls(i).lambda * (model.cls(i).ia.c2() + 1.0);
      out[i] += std::sqrt(dt * var) * normals(i);
    }
  }
  return out;
}

std::vector<SdePath> simulate_sde(SdeKind kind, const Model& model, const std::vector<double>& x0,
                                  double dt, double horizon, std::uint64_t seed, int n_paths,
                                  const SdeOptions& options, int workers) {
  const Stepper stepper = make_stepper(kind, model, x0, dt, horizon, seed, options);
  std::vector<SdePath> paths(n_paths);
  parallel_for(static_cast<std::size_t>(n_paths), workers, [&](std::size_t p) {
    SdePath& path = paths[p];
    path.dt = dt;
    path.t.reserve(stepper.steps + 1);
    path.x.reserve(stepper.steps + 1);
    path.l.reserve(stepper.steps + 1);
    stepper.integrate(static_cast<int>(p), [&](long, double t, const std::vector<double>& x, double l) {
      path.t.push_back(t);
      path.x.push_back(x);
      path.l.push_back(l);
    });
  });
  return paths;
}

std::vector<std::vector<std::vector<double>>> sde_marginal_samples(
    SdeKind kind, const Model& model, const std::vector<double>& x0, double dt, double horizon,
    std::uint64_t seed, int n_paths, const std::vector<double>& times, const SdeOptions& options,
    int workers) {
  const Stepper stepper = make_stepper(kind, model, x0, dt, horizon, seed, options);
  std::vector<long> target_steps;
  for (double t : times) {
    const long k = std::lround(t / dt);
    if (k < 0 || k > stepper.steps)
      throw ValidationError("NonPositiveParam", "marginal time outside the grid");
    target_steps.push_back(k);
  }
  const int nc = model.num_classes();
  std::vector<std::vector<std::vector<double>>> samples(
      nc, std::vector<std::vector<double>>(times.size(), std::vector<double>(n_paths)));
  parallel_for(static_cast<std::size_t>(n_paths), workers, [&](std::size_t p) {
    stepper.integrate(static_cast<int>(p), [&](long k, double, const std::vector<double>& x, double) {
      for (std::size_t ti = 0; ti < target_steps.size(); ++ti)
        if (target_steps[ti] == k)
          for (int c = 0; c < nc; ++c) samples[c][ti][p] = x[c];
    });
  });
  return samples;
}

std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>> limit_queues(
    const std::vector<std::vector<double>>& x, SdeKind kind) {
  std::vector<std::vector<double>> q(x.size()), psi(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const std::size_t nc = x[k].size();
    const double pos = std::max(coord_sum(x[k]), 0.0);
    q[k].assign(nc, 0.0);
    if (kind == SdeKind::FP)
      q[k].back() = pos;
    else
      for (std::size_t i = 0; i < nc; ++i) q[k][i] = pos / static_cast<double>(nc);
    psi[k].resize(nc);
    for (std::size_t i = 0; i < nc; ++i) psi[k][i] = x[k][i] - q[k][i];
  }
  return {std::move(q), std::move(psi)};
}

std::string sde_csv(const std::vector<SdePath>& paths, SdeKind kind) {
  std::ostringstream out;
  const int nc = paths.empty() ? 0 : static_cast<int>(paths.front().x.front().size());
  out << "path_id,t";
  for (int i = 1; i <= nc; ++i) out << ",X_" << i;
  out << ",L";
  for (int i = 1; i <= nc; ++i) out << ",Q_" << i;
  out << '\n';
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const auto [q, psi] = limit_queues(paths[p].x, kind);
    for (std::size_t k = 0; k < paths[p].t.size(); ++k) {
      out << p << ',' << fmt17(paths[p].t[k]);
      for (double v : paths[p].x[k]) out << ',' << fmt17(v);
      out << ',' << fmt17(paths[p].l[k]);
      for (double v : q[k]) out << ',' << fmt17(v);
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace htn
