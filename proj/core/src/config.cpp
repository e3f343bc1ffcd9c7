#include "hjsplit/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace hjsplit {

const char* to_string(Scheme scheme) { return scheme == Scheme::lax ? "lax" : "hopf"; }

Scheme parse_scheme(const std::string& text) {
  if (text == "lax") return Scheme::lax;
  if (text == "hopf") return Scheme::hopf;
  throw ConfigError(fmt::format("unknown scheme '{}' (expected lax or hopf)", text));
}

const char* to_string(RestartPolicy policy) {
  switch (policy) {
    case RestartPolicy::bump_sigma: return "bump_sigma";
    case RestartPolicy::reinit: return "reinit";
    case RestartPolicy::accept_at_cap: return "accept_at_cap";
  }
  return "?";
}

RestartPolicy parse_restart_policy(const std::string& text) {
  if (text == "bump_sigma" || text == "bump-sigma") return RestartPolicy::bump_sigma;
  if (text == "reinit") return RestartPolicy::reinit;
  if (text == "accept_at_cap" || text == "accept-at-cap") return RestartPolicy::accept_at_cap;
  throw ConfigError(fmt::format("unknown restart_policy '{}'", text));
}

const char* to_string(AnchorVariant variant) {
  return variant == AnchorVariant::appendix ? "appendix" : "main_text";
}

AnchorVariant parse_anchor_variant(const std::string& text) {
  if (text == "appendix") return AnchorVariant::appendix;
  if (text == "main_text" || text == "main-text") return AnchorVariant::main_text;
  throw ConfigError(fmt::format("unknown anchor variant '{}'", text));
}

double tau_for(double sigma, double budget) { return budget * (1.0 - 1e-12) / sigma; }

void PdhgConfig::validate() const {
  if (!(sigma > 0.0) || !(tau > 0.0))
    throw ConfigError(fmt::format("sigma and tau must be positive (sigma={}, tau={})", sigma, tau));
  if (!(sigma * tau * 4.0 < 1.0))
    throw ConfigError(fmt::format(
        "step sizes violate sigma*tau < 0.25 (sigma*tau = {:.17g}); the difference operator has norm "
        "up to 2",
        sigma * tau));
  if (!(theta >= 0.0 && theta <= 1.0))
    throw ConfigError(fmt::format("theta must lie in [0,1], got {}", theta));
  if (!(tol > 0.0)) throw ConfigError(fmt::format("tol must be positive, got {}", tol));
  if (!(init_radius >= 0.0))
    throw ConfigError(fmt::format("init_radius must be non-negative, got {}", init_radius));
  if (!(delta > 0.0)) throw ConfigError(fmt::format("delta must be positive, got {}", delta));
  if (max_count < 1) throw ConfigError(fmt::format("max_count must be >= 1, got {}", max_count));
  if (max_restarts < 0) throw ConfigError("max_restarts must be >= 0");
  if (!(value_tol >= 0.0)) throw ConfigError("value_tol must be >= 0");
  if (!(sigma_bump >= 0.0)) throw ConfigError("sigma_bump must be >= 0");
}

StepSizes adapt_sigma(const StepSizes& current, const PdhgConfig& cfg) {
  StepSizes next;
  next.sigma = current.sigma + cfg.sigma_bump;
  next.tau = tau_for(next.sigma);
  return next;
}

PdhgConfig ConfigOverrides::apply(PdhgConfig base) const {
  if (sigma) {
    base.sigma = *sigma;
    base.tau = tau_for(*sigma);
  }
  if (tau) base.tau = *tau;
  if (theta) base.theta = *theta;
  if (delta) base.delta = *delta;
  if (tol) base.tol = *tol;
  if (init_radius) base.init_radius = *init_radius;
  if (sigma_bump) base.sigma_bump = *sigma_bump;
  if (value_tol) base.value_tol = *value_tol;
  if (max_count) base.max_count = *max_count;
  if (max_restarts) base.max_restarts = *max_restarts;
  if (seed) base.seed = *seed;
  if (restart_policy) base.restart_policy = *restart_policy;
  if (anchor) base.anchor = *anchor;
  if (stop_on_value) base.stop_on_value = *stop_on_value;
  if (accept_at_cap) base.accept_at_cap = *accept_at_cap;
  return base;
}

namespace {

template <class T>
void take(std::optional<T>& mine, const std::optional<T>& theirs) {
  if (theirs) mine = theirs;
}

template <class T>
T scalar_as(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(fmt::format("config key '{}' has an invalid value '{}'", key,
                                  node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")));
  }
}

}  // namespace

ConfigOverrides ConfigOverrides::merged_with(const ConfigOverrides& other) const {
  ConfigOverrides out = *this;
  take(out.sigma, other.sigma);
  take(out.tau, other.tau);
  take(out.theta, other.theta);
  take(out.delta, other.delta);
  take(out.tol, other.tol);
  take(out.init_radius, other.init_radius);
  take(out.sigma_bump, other.sigma_bump);
  take(out.value_tol, other.value_tol);
  take(out.max_count, other.max_count);
  take(out.max_restarts, other.max_restarts);
  take(out.seed, other.seed);
  take(out.restart_policy, other.restart_policy);
  take(out.anchor, other.anchor);
  take(out.stop_on_value, other.stop_on_value);
  take(out.accept_at_cap, other.accept_at_cap);
  return out;
}

ConfigOverrides parse_config_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("config parse error: {}", e.what()));
  }
  ConfigOverrides out;
  if (root.IsNull()) return out;
  if (!root.IsMap()) throw ConfigError("config must be a flat key: value mapping");

  for (const auto& entry : root) {
    const auto key = entry.first.as<std::string>();
    const YAML::Node& v = entry.second;
    if (!v.IsScalar()) throw ConfigError(fmt::format("config key '{}' must be a scalar", key));
    if (key == "sigma") out.sigma = scalar_as<double>(v, key);
    else if (key == "tau") out.tau = scalar_as<double>(v, key);
    else if (key == "theta") out.theta = scalar_as<double>(v, key);
    else if (key == "delta") out.delta = scalar_as<double>(v, key);
    else if (key == "tol") out.tol = scalar_as<double>(v, key);
    else if (key == "init_radius") out.init_radius = scalar_as<double>(v, key);
    else if (key == "sigma_bump") out.sigma_bump = scalar_as<double>(v, key);
    else if (key == "value_tol") out.value_tol = scalar_as<double>(v, key);
    else if (key == "max_count") out.max_count = scalar_as<int>(v, key);
    else if (key == "max_restarts") out.max_restarts = scalar_as<int>(v, key);
    else if (key == "seed") out.seed = scalar_as<std::uint64_t>(v, key);
    else if (key == "restart_policy") out.restart_policy = parse_restart_policy(v.Scalar());
    else if (key == "anchor") out.anchor = parse_anchor_variant(v.Scalar());
    else if (key == "stop_on_value") out.stop_on_value = scalar_as<bool>(v, key);
    else if (key == "accept_at_cap") out.accept_at_cap = scalar_as<bool>(v, key);
    else throw ConfigError(fmt::format("unknown config key '{}'", key));
  }
  return out;
}

ConfigOverrides load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace hjsplit
