#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace folia {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Default tolerances. Projection oracles resolve to kProjTol; membership is
// one order looser to absorb accumulation across steps.
inline constexpr double kProjTol = 1e-10;
inline constexpr double kMembershipTol = 1e-9;
inline constexpr double kIndexTol = 1e-12;

struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
  validation_error(const std::string& msg, Vec p, Vec q)
      : std::runtime_error(msg), witness_a(std::move(p)), witness_b(std::move(q)) {}
  Vec witness_a, witness_b;  // violating pair, when one exists
};

struct numerical_error : std::runtime_error {
  numerical_error(const std::string& msg, double res)
      : std::runtime_error(msg), residual(res) {}
  double residual;
};

struct degenerate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_finite(const Vec& x, const char* what);
void require_dim(const Vec& x, Eigen::Index d, const char* what);

}  // namespace folia
