#include "htn/model.hpp"

#include <cmath>
#include <set>

#include "htn/errors.hpp"

namespace htn {

namespace {

constexpr double kLoadTol = 1e-9;       // configs are human-authored decimals
constexpr double kThetaEqTol = 1e-9;    // relative, for theta_i = theta_N in M

void reject_unknown_fields(const nlohmann::json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      throw ValidationError("ConfigSchemaError", "unknown field '" + item.key() + "' in " + where);
  }
}

double require_number(const nlohmann::json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw ValidationError("ConfigSchemaError", "missing numeric field '" + key + "' in " + where);
  return obj[key].get<double>();
}

Hazard parse_hazard(const nlohmann::json& spec, const std::string& where) {
  if (!spec.is_object()) throw ValidationError("ConfigSchemaError", "hazard must be an object in " + where);
  reject_unknown_fields(spec, {"family", "params"}, where + ".hazard");
  const std::string family = spec.value("family", "");
  if (!spec.contains("params") || !spec["params"].is_array())
    throw ValidationError("ConfigSchemaError", "hazard.params must be an array in " + where);
  const auto& params = spec["params"];
  if (family == "linear") {
    if (params.size() != 1) throw ValidationError("ConfigSchemaError", "linear hazard takes one parameter");
    return Hazard::linear(params[0].get<double>());
  }
  if (family == "power") {
    if (params.size() != 2) throw ValidationError("ConfigSchemaError", "power hazard takes two parameters");
    return Hazard::power(params[0].get<double>(), params[1].get<double>());
  }
  if (family == "table") {
    std::vector<std::pair<double, double>> knots;
    for (const auto& k : params) {
      if (!k.is_array() || k.size() != 2)
        throw ValidationError("ConfigSchemaError", "table knots must be [x, h] pairs");
      knots.emplace_back(k[0].get<double>(), k[1].get<double>());
    }
    return Hazard::table(std::move(knots));
  }
  throw ValidationError("ConfigSchemaError", "unknown hazard family '" + family + "'");
}

IaDist parse_ia(const nlohmann::json& spec, const std::string& where) {
  if (!spec.is_object()) throw ValidationError("ConfigSchemaError", "ia_dist must be an object in " + where);
  reject_unknown_fields(spec, {"kind", "param"}, where + ".ia_dist");
  const std::string kind = spec.value("kind", "");
  IaDist ia;
  if (kind == "exponential") {
    ia.kind = IaDist::Kind::Exponential;
  } else if (kind == "deterministic") {
    ia.kind = IaDist::Kind::Deterministic;
  } else if (kind == "uniform") {
    ia.kind = IaDist::Kind::Uniform;
    ia.width = require_number(spec, "param", where + ".ia_dist");
    if (!(ia.width > 0.0 && ia.width < 2.0))
      throw ValidationError("ConfigSchemaError", "uniform ia_dist width must lie in (0, 2)");
    return ia;
  } else {
    throw ValidationError("ConfigSchemaError", "unknown ia_dist kind '" + kind + "'");
  }
  if (spec.contains("param"))
    throw ValidationError("ConfigSchemaError", "ia_dist.param is only valid for the uniform kind");
  return ia;
}

}  // namespace

double IaDist::c2() const {
  switch (kind) {
    case Kind::Exponential: return 1.0;
    case Kind::Deterministic: return 0.0;
    case Kind::Uniform: return width * width / 12.0;
  }
  return 0.0;
}

std::string IaDist::name() const {
  switch (kind) {
    case Kind::Exponential: return "exponential";
    case Kind::Deterministic: return "deterministic";
    case Kind::Uniform: return "uniform";
  }
  return "?";
}

std::string policy_name(Policy p) { return p == Policy::FP ? "fp" : "slq"; }

Policy parse_policy(const std::string& s) {
  if (s == "fp") return Policy::FP;
  if (s == "slq") return Policy::SLQ;
  throw ValidationError("ConfigSchemaError", "unknown policy '" + s + "' (expected fp or slq)");
}

Model Model::validate(const nlohmann::json& config, bool require_slq) {
  if (!config.is_object()) throw ValidationError("ConfigSchemaError", "config must be a JSON object");
  reject_unknown_fields(config, {"schema_version", "classes"}, "config");
  if (!config.contains("schema_version") || config["schema_version"] != 1)
    throw ValidationError("ConfigSchemaError", "schema_version must be 1");
  if (!config.contains("classes") || !config["classes"].is_array() || config["classes"].empty())
    throw ValidationError("ConfigSchemaError", "config.classes must be a non-empty array");

  std::vector<ClassParams> classes;
  int idx = 1;
  for (const auto& c : config["classes"]) {
    const std::string where = "classes[" + std::to_string(idx) + "]";
    reject_unknown_fields(c, {"lambda", "lambda_hat", "mu", "r", "hazard", "ia_dist"}, where);
    ClassParams p;
    p.lambda = require_number(c, "lambda", where);
    p.lambda_hat = require_number(c, "lambda_hat", where);
    p.mu = require_number(c, "mu", where);
    p.r = require_number(c, "r", where);
    if (!c.contains("hazard")) throw ValidationError("ConfigSchemaError", where + " misses hazard");
    p.hazard = parse_hazard(c["hazard"], where);
    if (!c.contains("ia_dist")) throw ValidationError("ConfigSchemaError", where + " misses ia_dist");
    p.ia = parse_ia(c["ia_dist"], where);
    classes.push_back(std::move(p));
    ++idx;
  }
  Model model = from_classes(std::move(classes));
  if (require_slq) model.require_slq_ordering();
  return model;
}

Model Model::from_classes(std::vector<ClassParams> classes) {
  Model m;
  m.classes_ = std::move(classes);
  m.derive_and_check();
  return m;
}

void Model::derive_and_check() {
  const int n = num_classes();
  rho_.resize(n);
  theta_.resize(n);
  double load = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& c = classes_[i];
    if (!(c.lambda > 0.0)) throw ValidationError("NonPositiveParam", "lambda must be positive (class " + std::to_string(i + 1) + ")");
    if (!(c.mu > 0.0)) throw ValidationError("NonPositiveParam", "mu must be positive (class " + std::to_string(i + 1) + ")");
    if (!(c.r > 0.0)) throw ValidationError("NonPositiveParam", "r must be positive (class " + std::to_string(i + 1) + ")");
    rho_[i] = c.lambda / c.mu;
    theta_[i] = c.lambda * c.hazard.inverse(c.r);  // RangeError surfaces here for tables
    if (!(theta_[i] > 0.0))
      throw ValidationError("InvalidHazard", "theta must be positive (class " + std::to_string(i + 1) + ")");
    load += rho_[i];
  }
  if (std::abs(load - 1.0) > kLoadTol)
    throw ValidationError("CriticalLoadViolation",
                          "sum(rho) = " + std::to_string(load) + " differs from 1 beyond 1e-9");

  theta_monotone_ = true;
  for (int i = 0; i + 1 < n; ++i) {
    if (theta_[i] < theta_[i + 1] - kThetaEqTol * std::max(1.0, std::abs(theta_[i + 1]))) {
      theta_monotone_ = false;
      offending_ = {i + 1, i + 2};
      break;
    }
  }
  if (theta_monotone_) {
    m_ = n;
    const double tn = theta_[n - 1];
    for (int i = 0; i < n; ++i) {
      if (std::abs(theta_[i] - tn) <= kThetaEqTol * std::max(1.0, std::abs(tn))) {
        m_ = i + 1;
        break;
      }
    }
  }
}

int Model::m() const {
  require_slq_ordering();
  return m_;
}

void Model::require_slq_ordering() const {
  if (!theta_monotone_)
    throw ValidationError("NonMonotoneTheta",
                          "theta must be non-increasing for SLQ; violated between classes " +
                              std::to_string(offending_.first) + " and " + std::to_string(offending_.second));
}

double Model::arrival_rate_n(int i, long n) const {
  const double rate = static_cast<double>(n) * classes_[i].lambda +
                      std::sqrt(static_cast<double>(n)) * classes_[i].lambda_hat;
  if (!(rate > 0.0))
    throw ValidationError("InvalidRate", "lambda^n is not positive (class " + std::to_string(i + 1) + ")");
  return rate;
}

bool Model::join_decision(int i, long q, long n) const {
  const auto& c = classes_[i];
  const double scaled = static_cast<double>(q) / (std::sqrt(static_cast<double>(n)) * c.lambda);
  return c.hazard(scaled) <= c.r;
}

nlohmann::json Model::to_json() const {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : classes_) {
    nlohmann::json hz;
    switch (c.hazard.family()) {
      case Hazard::Family::Linear:
        hz = {{"family", "linear"}, {"params", {c.hazard.param_a()}}};
        break;
      case Hazard::Family::Power:
        hz = {{"family", "power"}, {"params", {c.hazard.param_a(), c.hazard.param_p()}}};
        break;
      case Hazard::Family::Table: {
        nlohmann::json knots = nlohmann::json::array();
        for (const auto& [x, y] : c.hazard.knots()) knots.push_back({x, y});
        hz = {{"family", "table"}, {"params", knots}};
        break;
      }
    }
    nlohmann::json ia = {{"kind", c.ia.name()}};
    if (c.ia.kind == IaDist::Kind::Uniform) ia["param"] = c.ia.width;
    classes.push_back({{"lambda", c.lambda},
                       {"lambda_hat", c.lambda_hat},
                       {"mu", c.mu},
                       {"r", c.r},
                       {"hazard", hz},
                       {"ia_dist", ia}});
  }
  return {{"schema_version", 1}, {"classes", classes}};
}

}  // namespace htn
