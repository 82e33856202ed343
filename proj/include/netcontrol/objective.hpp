#pragma once

#include "netcontrol/backbone.hpp"
#include "netcontrol/network.hpp"
#include "netcontrol/types.hpp"

namespace netcontrol {

enum class LossMode { Lambda, Budget };
enum class CostVariant { Value, L1, L2 };
enum class ConstraintSense { Equality, Inequality };

struct LossConfig {
  LossMode mode = LossMode::Lambda;
  double lambda = 0.0;  ///< cost weight (lambda mode)
  double budget = 0.0;  ///< EUR 1M (budget mode)
  CostVariant cost = CostVariant::Value;
  ConstraintSense sense = ConstraintSense::Inequality;
};

struct LossBreakdown {
  double control_loss = 0.0;  ///< sum over targets of (1 - c_j)
  double cost_loss = 0.0;     ///< configured cost variant; EUR 1M for value cost
  double total = 0.0;         ///< lambda mode: control + lambda*cost; budget mode: augmented value
  double constraint = 0.0;    ///< H; 0 in lambda mode
  double rho = 0.0;
  double alpha = 0.0;
};

/// Lack of control over the targets, sum_{j in T} (1 - c_j).
double control_loss(const Eigen::Ref<const Vector>& c, const NodeSelection& targets);

/// l_p norm of the intervention, p in {1, 2}.
double cost_lp(const Eigen::Ref<const Vector>& o, int p);

/// Value-weighted spend sum_{j in S} o_j v_j (EUR 1M).
double cost_value(const Eigen::Ref<const Vector>& o, const OwnershipNetwork& net,
                  const NodeSelection& sources);

double cost(const Eigen::Ref<const Vector>& o, const OwnershipNetwork& net,
            const NodeSelection& sources, CostVariant variant);

/// control + lambda * cost. Lambda mode only.
LossBreakdown total_loss(const ControlVector& control, const Eigen::Ref<const Vector>& o,
                         const OwnershipNetwork& net, const NodeSelection& sources,
                         const NodeSelection& targets, const LossConfig& config);

/// H = cost_value(o) - B, clamped at 0 from below for the inequality sense.
double budget_constraint(const Eigen::Ref<const Vector>& o, const OwnershipNetwork& net,
                         const NodeSelection& sources, double budget, ConstraintSense sense);

/// control + (rho/2) H^2 + alpha |H|.
double augmented_loss(const ControlVector& control, const Eigen::Ref<const Vector>& o,
                      const OwnershipNetwork& net, const NodeSelection& sources,
                      const NodeSelection& targets, double budget, ConstraintSense sense,
                      double rho, double alpha);

/// Number of nodes with total control at or above the cutoff.
Index control_set_size(const Eigen::Ref<const Vector>& c, double c_cut);

/// Achieved control over the targets as a percentage of the shares available
/// in the network (sum of o_max over T).
double control_pct_available(const ControlVector& control, const NodeSelection& targets,
                             const Eigen::Ref<const Vector>& o_max);

/// Achieved control over the targets as a percentage of full equity (|T|).
double control_pct_equity(const ControlVector& control, const NodeSelection& targets);

}  // namespace netcontrol
