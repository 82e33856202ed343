#include "netcontrol/objective.hpp"

#include <cmath>

namespace netcontrol {

double control_loss(const Eigen::Ref<const Vector>& c, const NodeSelection& targets) {
  if (targets.empty()) throw InvalidInput("control_loss: empty target set");
  double loss = 0.0;
  for (Index j : targets.indices) loss += 1.0 - c(j);
  return loss;
}

double cost_lp(const Eigen::Ref<const Vector>& o, int p) {
  switch (p) {
    case 1:
      return o.cwiseAbs().sum();
    case 2:
      return o.norm();
    default:
      throw InvalidInput("cost_lp: p must be 1 or 2");
  }
}

double cost_value(const Eigen::Ref<const Vector>& o, const OwnershipNetwork& net,
                  const NodeSelection& sources) {
  double total = 0.0;
  for (Index j : sources.indices) total += o(j) * net.values()(j);
  return total;
}

double cost(const Eigen::Ref<const Vector>& o, const OwnershipNetwork& net,
            const NodeSelection& sources, CostVariant variant) {
  switch (variant) {
    case CostVariant::Value:
      return cost_value(o, net, sources);
    case CostVariant::L1:
      return cost_lp(o, 1);
    case CostVariant::L2:
      return cost_lp(o, 2);
  }
  throw InvalidInput("cost: unknown variant");
}

LossBreakdown total_loss(const ControlVector& control, const Eigen::Ref<const Vector>& o,
                         const OwnershipNetwork& net, const NodeSelection& sources,
                         const NodeSelection& targets, const LossConfig& config) {
  if (config.mode != LossMode::Lambda) {
    throw InvalidInput("total_loss: called in budget mode; use augmented_loss");
  }
  LossBreakdown breakdown;
  breakdown.control_loss = control_loss(control.total, targets);
  breakdown.cost_loss = cost(o, net, sources, config.cost);
  breakdown.total = breakdown.control_loss + config.lambda * breakdown.cost_loss;
  return breakdown;
}

double budget_constraint(const Eigen::Ref<const Vector>& o, const OwnershipNetwork& net,
                         const NodeSelection& sources, double budget, ConstraintSense sense) {
  const double h = cost_value(o, net, sources) - budget;
  if (sense == ConstraintSense::Inequality && h < 0.0) return 0.0;
  return h;
}

double augmented_loss(const ControlVector& control, const Eigen::Ref<const Vector>& o,
                      const OwnershipNetwork& net, const NodeSelection& sources,
                      const NodeSelection& targets, double budget, ConstraintSense sense,
                      double rho, double alpha) {
  if (rho <= 0.0) throw InvalidInput("augmented_loss: rho must be positive");
  if (alpha < 0.0) throw InvalidInput("augmented_loss: alpha must be non-negative");
  const double h = budget_constraint(o, net, sources, budget, sense);
  return control_loss(control.total, targets) + 0.5 * rho * h * h + alpha * std::abs(h);
}

Index control_set_size(const Eigen::Ref<const Vector>& c, double c_cut) {
  if (!(c_cut > 0.0 && c_cut <= 1.0)) throw InvalidInput("control_set_size: cutoff outside (0,1]");
  Index count = 0;
  for (Index j = 0; j < c.size(); ++j) {
    if (c(j) >= c_cut) ++count;
  }
  return count;
}

double control_pct_available(const ControlVector& control, const NodeSelection& targets,
                             const Eigen::Ref<const Vector>& o_max) {
  double achieved = 0.0;
  double available = 0.0;
  for (Index j : targets.indices) {
    achieved += control.total(j);
    available += o_max(j);
  }
  return available > 0.0 ? 100.0 * achieved / available : 0.0;
}

double control_pct_equity(const ControlVector& control, const NodeSelection& targets) {
  if (targets.empty()) return 0.0;
  double achieved = 0.0;
  for (Index j : targets.indices) achieved += control.total(j);
  return 100.0 * achieved / static_cast<double>(targets.size());
}

}  // namespace netcontrol
