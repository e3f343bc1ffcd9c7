#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hjsplit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Which discretized formula a solve uses. Lax bundles carry time slots
/// 0..N, Hopf bundles carry slots 1..N.
enum class Scheme { lax, hopf };

const char* to_string(Scheme scheme);
Scheme parse_scheme(const std::string& text);

/// Invalid configuration or problem data (bad step sizes, missing conjugate, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Shape or dimension mismatch between a problem, a point and a bundle.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solve produced a non-finite iterate.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t iteration)
      : std::runtime_error(what), iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace hjsplit
