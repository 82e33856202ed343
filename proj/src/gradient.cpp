#include "netcontrol/gradient.hpp"

#include <cmath>

namespace netcontrol {

namespace {

LossBreakdown make_breakdown(const InterventionProblem& problem, const ControlVector& control,
                             const Eigen::Ref<const Vector>& o, double rho, double alpha) {
  const OwnershipNetwork& net = problem.network();
  if (problem.loss.mode == LossMode::Lambda) {
    return total_loss(control, o, net, problem.sources, problem.targets, problem.loss);
  }
  LossBreakdown breakdown;
  breakdown.control_loss = control_loss(control.total, problem.targets);
  breakdown.cost_loss = cost_value(o, net, problem.sources);
  breakdown.constraint =
      budget_constraint(o, net, problem.sources, problem.loss.budget, problem.loss.sense);
  breakdown.rho = rho;
  breakdown.alpha = alpha;
  const double h = breakdown.constraint;
  breakdown.total = breakdown.control_loss + 0.5 * rho * h * h + alpha * std::abs(h);
  return breakdown;
}

// d(cost term)/d(o_k) for source node k, already scaled by the lambda weight
// or by the augmented-Lagrangian penalty derivative.
double cost_term_gradient(const InterventionProblem& problem, const Eigen::Ref<const Vector>& o,
                          Index k, const LossBreakdown& breakdown) {
  const OwnershipNetwork& net = problem.network();
  if (problem.loss.mode == LossMode::Lambda) {
    switch (problem.loss.cost) {
      case CostVariant::Value:
        return problem.loss.lambda * net.values()(k);
      case CostVariant::L1:
        return problem.loss.lambda;  // o >= 0
      case CostVariant::L2: {
        const double norm = o.norm();
        return norm > 0.0 ? problem.loss.lambda * o(k) / norm : 0.0;
      }
    }
    return 0.0;
  }
  // Augmented Lagrangian: d/dH (rho/2 H^2 + alpha |H|) * dH/do_k. For the
  // inequality sense H = max(0, cost - B), dH/do_k vanishes on the slack
  // side; at H = 0 the |H| subgradient is taken as 0.
  const double h = breakdown.constraint;
  if (problem.loss.sense == ConstraintSense::Inequality && h <= 0.0) return 0.0;
  const double sign = h > 0.0 ? 1.0 : (h < 0.0 ? -1.0 : 0.0);
  return (breakdown.rho * h + breakdown.alpha * sign) * net.values()(k);
}

}  // namespace

Vector reparametrize(const InterventionProblem& problem, const Eigen::Ref<const Vector>& p_u) {
  if (p_u.size() != problem.sources.size()) {
    throw InvalidInput("reparametrize: parameter length does not match source count");
  }
  const Index n = problem.network().size();
  Vector o = Vector::Zero(n);
  for (Index k = 0; k < p_u.size(); ++k) {
    const Index j = problem.sources.indices[static_cast<std::size_t>(k)];
    o(j) = problem.o_max(j) * sigmoid(p_u(k));
  }
  return o;
}

GradientReport evaluate_with_gradient(const InterventionProblem& problem,
                                      const Eigen::Ref<const Vector>& p_u, double rho,
                                      double alpha) {
  const OwnershipNetwork& net = problem.network();
  const Index n = net.size();

  GradientReport report;
  report.o = reparametrize(problem, p_u);
  const Matrix adjusted = adjust_ownership(net, report.o);
  const PropagationSolve solve(net, adjusted);
  report.control = solve.forward(report.o);
  report.loss = make_breakdown(problem, report.control, report.o, rho, alpha);

  // dL/dc is -1 on the targets (control loss) and 0 elsewhere.
  Vector g_c = Vector::Zero(n);
  for (Index j : problem.targets.indices) g_c(j) = -1.0;
  const Vector y = solve.adjoint(g_c);

  // Through the implicit equation c = o + B(o)^T c, buying do_k of node k
  // adds do_k directly and shrinks k's incoming column, so
  // dL/do_k = y_k (1 - sum_i a_ik c_i) + cost term.
  report.gradient.resize(problem.sources.size());
  for (Index k = 0; k < problem.sources.size(); ++k) {
    const Index j = problem.sources.indices[static_cast<std::size_t>(k)];
    const double column_control = net.adjacency().col(j).dot(report.control.total);
    const double dloss_do = y(j) * (1.0 - column_control) +
                            cost_term_gradient(problem, report.o, j, report.loss);
    report.gradient(k) = dloss_do * problem.o_max(j) * sigmoid_derivative(p_u(k));
  }
  return report;
}

double evaluate_loss(const InterventionProblem& problem, const Eigen::Ref<const Vector>& p_u,
                     double rho, double alpha) {
  const OwnershipNetwork& net = problem.network();
  const Vector o = reparametrize(problem, p_u);
  const Matrix adjusted = adjust_ownership(net, o);
  const ControlVector control = propagate(net, adjusted, o);
  return make_breakdown(problem, control, o, rho, alpha).total;
}

Vector finite_difference_gradient(const InterventionProblem& problem,
                                  const Eigen::Ref<const Vector>& p_u, double step, double rho,
                                  double alpha) {
  return central_difference(
      [&](const Vector& x) { return evaluate_loss(problem, x, rho, alpha); }, p_u, step);
}

GradCheckReport grad_check(const InterventionProblem& problem, const Eigen::Ref<const Vector>& p_u,
                           double step, double rtol, double atol, double rho, double alpha) {
  GradCheckReport report;
  report.analytic = evaluate_with_gradient(problem, p_u, rho, alpha).gradient;
  report.fd = finite_difference_gradient(problem, p_u, step, rho, alpha);
  for (Index k = 0; k < report.analytic.size(); ++k) {
    const double a = report.analytic(k);
    const double f = report.fd(k);
    const double dev = std::abs(a - f);
    const double scale = std::max(std::abs(a), std::abs(f));
    report.max_abs_dev = std::max(report.max_abs_dev, dev);
    report.max_rel_dev = std::max(report.max_rel_dev, dev / std::max(scale, atol));
    if (dev > std::max(atol, rtol * scale)) report.pass = false;
  }
  return report;
}

}  // namespace netcontrol
