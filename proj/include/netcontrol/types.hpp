#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netcontrol {

using Scalar = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Malformed files, invalid parameters, broken preconditions.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// I - B is numerically singular: some cycle retains ownership without
/// leakage. Carries the node ids of the offending strongly connected
/// component when one can be isolated.
class SingularOwnership : public std::runtime_error {
 public:
  SingularOwnership(const std::string& msg, std::vector<std::string> component)
      : std::runtime_error(msg), component_(std::move(component)) {}

  const std::vector<std::string>& component() const { return component_; }

 private:
  std::vector<std::string> component_;
};

/// An optimization run produced a non-finite loss.
class Diverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netcontrol
