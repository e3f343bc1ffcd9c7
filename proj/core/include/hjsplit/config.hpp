#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hjsplit/types.hpp"

namespace hjsplit {

/// What a solve does when it hits max_count without meeting the
/// squared-update test.
enum class RestartPolicy {
  bump_sigma,     // sigma += sigma_bump, tau = budget / sigma, keep iterates
  reinit,         // same sigma/tau, fresh random initialization
  accept_at_cap,  // no restart; keep the capped iterate
};

/// Which dual iterate feeds the primal anchor x - tau * D^T p.
/// `appendix` uses the fresh p^{k+1} (as in the tutorial listings),
/// `main_text` the previous p^k, kept for comparison.
enum class AnchorVariant { appendix, main_text };

const char* to_string(RestartPolicy policy);
RestartPolicy parse_restart_policy(const std::string& text);
const char* to_string(AnchorVariant variant);
AnchorVariant parse_anchor_variant(const std::string& text);

/// The sigma*tau budget 1/||D||^2 with ||D|| bounded by 2.
inline constexpr double kStepBudget = 0.25;

/// tau for a given sigma, just inside the strict sigma*tau < budget guard.
double tau_for(double sigma, double budget = kStepBudget);

struct PdhgConfig {
  double sigma = 50.0;
  double tau = tau_for(50.0);
  double theta = 1.0;
  double delta = 0.02;
  double tol = 1e-8;
  int max_count = 50000;
  std::uint64_t seed = 0;
  double init_radius = 0.1;

  double sigma_bump = 20.0;
  RestartPolicy restart_policy = RestartPolicy::bump_sigma;
  int max_restarts = 0;

  /// Relative fval change used by the value-function stopping test. 0 disables.
  double value_tol = 0.0;
  /// When true the relative-fval test is the primary stopping rule,
  /// checked every iteration, instead of a fallback at the cap.
  bool stop_on_value = false;
  /// Report the capped iterate as accepted (the value is always reported).
  bool accept_at_cap = false;

  AnchorVariant anchor = AnchorVariant::appendix;
  bool record_history = false;

  /// Throws ConfigError unless sigma, tau > 0, 4*sigma*tau < 1,
  /// theta in [0,1], tol > 0, init_radius >= 0, delta > 0, max_count >= 1.
  void validate() const;
};

/// Step sizes carried across restarts.
struct StepSizes {
  double sigma = 0.0;
  double tau = 0.0;
};

/// Restart adaptation: sigma += cfg.sigma_bump, tau = tau_for(sigma).
StepSizes adapt_sigma(const StepSizes& current, const PdhgConfig& cfg);

/// Optional per-key overrides layered on top of a problem's default config.
struct ConfigOverrides {
  std::optional<double> sigma, tau, theta, delta, tol, init_radius, sigma_bump, value_tol;
  std::optional<int> max_count, max_restarts;
  std::optional<std::uint64_t> seed;
  std::optional<RestartPolicy> restart_policy;
  std::optional<AnchorVariant> anchor;
  std::optional<bool> stop_on_value, accept_at_cap;

  /// Applies every set field. A sigma override without a tau override
  /// resets tau to tau_for(sigma).
  PdhgConfig apply(PdhgConfig base) const;
  /// Fields set in `other` win.
  ConfigOverrides merged_with(const ConfigOverrides& other) const;
};

/// Parses a flat YAML mapping with the documented keys (sigma, tau, theta,
/// delta, tol, max_count, seed, init_radius, sigma_bump, restart_policy,
/// max_restarts, value_tol, stop_on_value, accept_at_cap, anchor).
/// Unknown keys are a ConfigError.
ConfigOverrides parse_config_text(const std::string& text);
ConfigOverrides load_config_file(const std::string& path);

}  // namespace hjsplit
