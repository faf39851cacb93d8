#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "htn/hazard.hpp"

namespace htn {

enum class Policy { FP, SLQ };

std::string policy_name(Policy p);
Policy parse_policy(const std::string& s);

// Inter-arrival law with unit mean. The squared coefficient of variation is
// fixed by the family: exponential -> 1, deterministic -> 0,
// uniform(width a) -> a^2/12.
struct IaDist {
  enum class Kind { Exponential, Deterministic, Uniform };
  Kind kind = Kind::Exponential;
  double width = 0.0;  // uniform only, support [1-width/2, 1+width/2], width < 2

  double c2() const;
  std::string name() const;
};

struct ClassParams {
  double lambda = 0.0;      // fluid arrival rate, per unit time per unit capacity
  double lambda_hat = 0.0;  // second-order rate
  double mu = 0.0;          // service rate (mean service time 1/mu)
  double r = 0.0;           // reneging cost
  Hazard hazard = Hazard::linear(1.0);
  IaDist ia;
};

// Validated model: class parameters plus derived loads rho_i = lambda_i/mu_i
// and thresholds theta_i = lambda_i * h_i^{-1}(r_i). The critical load
// condition sum(rho) = 1 must hold within 1e-9.
class Model {
 public:
  // Builds and validates from the external JSON config (schema_version 1,
  // unknown fields rejected). When require_slq is set, the SLQ class ordering
  // theta_1 >= ... >= theta_N is enforced as well.
  static Model validate(const nlohmann::json& config, bool require_slq = false);
  // Programmatic construction used by tests and internal callers; runs the
  // same derived-field validation.
  static Model from_classes(std::vector<ClassParams> classes);

  int num_classes() const { return static_cast<int>(classes_.size()); }
  const ClassParams& cls(int i) const { return classes_[i]; }
  double rho(int i) const { return rho_[i]; }
  double theta(int i) const { return theta_[i]; }
  const std::vector<double>& theta() const { return theta_; }

  bool theta_monotone() const { return theta_monotone_; }
  // min{i : theta_i = theta_N}, 1-based, defined only under the SLQ ordering.
  int m() const;
  void require_slq_ordering() const;

  // lambda_i^n = n*lambda_i + sqrt(n)*lambda_hat_i. Throws InvalidRate if the
  // result is not positive.
  double arrival_rate_n(int i, long n) const;

  // Threshold joining rule: join iff h_i(q / (sqrt(n)*lambda_i)) <= r_i.
  bool join_decision(int i, long q, long n) const;

  nlohmann::json to_json() const;

 private:
  Model() = default;
  void derive_and_check();

  std::vector<ClassParams> classes_;
  std::vector<double> rho_;
  std::vector<double> theta_;
  bool theta_monotone_ = false;
  int m_ = 0;                        // valid when theta_monotone_
  std::pair<int, int> offending_{0, 0};  // first adjacent pair violating the ordering
};

}  // namespace htn
