#pragma once

#include "netcontrol/gradient.hpp"
#include "netcontrol/problem.hpp"
#include "netcontrol/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace netcontrol {

enum class InitScheme { Gaussian, BudgetEstimate };

struct OptimizerConfig {
  double learning_rate = 0.1;
  /// Retry at the remaining rates of {1, 0.1, 0.001} when a run diverges or
  /// hits the step cap while the loss is still moving.
  bool auto_retry_learning_rate = true;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int max_steps = 3000;
  int convergence_window = 5;
  double convergence_tolerance = 1e-8;
  InitScheme init = InitScheme::Gaussian;
  double init_mean = -7.0;
  double init_stddev = 1e-4;
  std::uint64_t seed = 0;
  /// When set, overrides the init scheme (used for warm starts).
  std::optional<Vector> start;
};

struct ALConfig {
  double initial_rho = 1.0;
  double initial_alpha = 0.0;
  double rho_growth = 10.0;
  /// rho grows whenever the new |H| exceeds this fraction of the previous one.
  double violation_shrink_threshold = 0.25;
  double tolerance_relative = 1e-3;  ///< of the budget
  double tolerance_floor = 1e-6;
  int max_outer_iterations = 20;

  double tolerance_for(double budget) const {
    const double rel = tolerance_relative * budget;
    return rel > tolerance_floor ? rel : tolerance_floor;
  }
};

enum class StopReason { ConvergenceWindow, StepCap };

struct TrajectoryPoint {
  int outer = 0;
  int step = 0;
  LossBreakdown loss;
};

struct OptimizationResult {
  Vector o;    ///< full-length final intervention
  Vector p_u;  ///< over S
  ControlVector control;
  LossBreakdown final_loss;
  std::vector<TrajectoryPoint> trajectory;
  bool converged = false;
  StopReason reason = StopReason::StepCap;
  int steps = 0;
  double learning_rate_used = 0.0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  // budget mode
  int outer_iterations = 0;
  double final_constraint = 0.0;
  bool feasible = true;
};

/// Draws initial parameters: gaussian p_u ~ N(init_mean, init_stddev), or the
/// budget estimate o_j = min(o_max_j, B / (|S| v_j)) mapped through the
/// inverse sigmoid. The estimate needs a budget: in lambda mode pass
/// budget_hint or get InvalidInput.
AgentParams init_params(InitScheme scheme, const InterventionProblem& problem, std::uint64_t seed,
                        std::optional<double> budget_hint = std::nullopt,
                        double mean = -7.0, double stddev = 1e-4);

/// Adam descent on p_u for a lambda-mode problem. Stops when the loss changes
/// by less than the tolerance over `convergence_window` consecutive steps, or
/// at the step cap. Deterministic given (problem, config, seed).
OptimizationResult optimize(const InterventionProblem& problem, const OptimizerConfig& config);

struct SweepPoint {
  double lambda = 0.0;
  bool ok = false;
  std::string error;
  OptimizationResult result;
};

/// Independent optimizations per lambda (RNG stream derived from seed and the
/// lambda value). With warm_start, each run starts from the previous
/// solution instead.
std::vector<SweepPoint> lambda_sweep(const InterventionProblem& problem,
                                     const std::vector<double>& grid,
                                     const OptimizerConfig& config, bool warm_start = false);

/// Augmented-Lagrangian outer loop for a budget-mode problem: inner Adam on
/// the augmented loss, then alpha += rho |H|, with rho scaled by rho_growth
/// whenever |H| fails to shrink below the threshold fraction of the previous
/// violation. Stops once |H| is within tolerance or at the outer cap; the
/// result is flagged infeasible when the cap is hit first.
OptimizationResult optimize_budget(const InterventionProblem& problem, const ALConfig& al,
                                   const OptimizerConfig& config);

}  // namespace netcontrol
