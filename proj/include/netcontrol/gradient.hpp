#pragma once

#include "netcontrol/backbone.hpp"
#include "netcontrol/objective.hpp"
#include "netcontrol/problem.hpp"
#include "netcontrol/types.hpp"

#include <cmath>

namespace netcontrol {

/// Numerically stable logistic function.
template <typename T>
T sigmoid(T x) {
  if (x >= T(0)) {
    return T(1) / (T(1) + std::exp(-x));
  }
  const T e = std::exp(x);
  return e / (T(1) + e);
}

template <typename T>
T sigmoid_derivative(T x) {
  const T s = sigmoid(x);
  return s * (T(1) - s);
}

/// Inverse sigmoid; input must lie strictly in (0, 1).
template <typename T>
T logit(T p) {
  return std::log(p / (T(1) - p));
}

/// Unbounded parameter vector over S. o_j = o_max_j * sigmoid(p_u_j) stays
/// strictly inside (0, o_max_j) for finite parameters.
struct AgentParams {
  Vector p_u;
};

/// Maps unbounded parameters over S to the full-length intervention vector.
Vector reparametrize(const InterventionProblem& problem, const Eigen::Ref<const Vector>& p_u);

struct GradientReport {
  LossBreakdown loss;
  Vector gradient;  ///< d(loss)/d(p_u), length |S|
  Vector o;         ///< full-length intervention
  ControlVector control;
};

/// Evaluates the configured scalar loss and its exact gradient with respect
/// to p_u. The control dependence is differentiated through the implicit
/// equation c = o + B(o)^T c with one adjoint solve on the factorization
/// already computed for the forward pass. rho/alpha are the augmented
/// Lagrangian state and are ignored in lambda mode.
GradientReport evaluate_with_gradient(const InterventionProblem& problem,
                                      const Eigen::Ref<const Vector>& p_u, double rho = 1.0,
                                      double alpha = 0.0);

/// Loss-only evaluation along the same path.
double evaluate_loss(const InterventionProblem& problem, const Eigen::Ref<const Vector>& p_u,
                     double rho = 1.0, double alpha = 0.0);

/// Central differences (f(x+h e_k) - f(x-h e_k)) / 2h of a scalar function.
template <typename F>
Vector central_difference(F&& f, const Eigen::Ref<const Vector>& x, double h) {
  if (!(h > 0.0)) throw InvalidInput("central_difference: step must be positive");
  Vector grad(x.size());
  Vector probe = x;
  for (Index k = 0; k < x.size(); ++k) {
    probe(k) = x(k) + h;
    const double up = f(probe);
    probe(k) = x(k) - h;
    const double down = f(probe);
    probe(k) = x(k);
    grad(k) = (up - down) / (2.0 * h);
  }
  return grad;
}

/// Central finite differences of the configured loss per coordinate of p_u.
Vector finite_difference_gradient(const InterventionProblem& problem,
                                  const Eigen::Ref<const Vector>& p_u, double step = 1e-5,
                                  double rho = 1.0, double alpha = 0.0);

struct GradCheckReport {
  Vector analytic;
  Vector fd;
  double max_abs_dev = 0.0;
  double max_rel_dev = 0.0;
  bool pass = true;
};

/// Compares the analytic gradient against central differences. A coordinate
/// passes when |a - f| <= max(atol, rtol * max(|a|, |f|)).
GradCheckReport grad_check(const InterventionProblem& problem, const Eigen::Ref<const Vector>& p_u,
                           double step = 1e-5, double rtol = 1e-4, double atol = 1e-8,
                           double rho = 1.0, double alpha = 0.0);

}  // namespace netcontrol
