#include "netcontrol/optimizer.hpp"

#include "netcontrol/rng.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace netcontrol {

namespace {

void validate_config(const OptimizerConfig& config) {
  if (!(config.learning_rate > 0.0)) throw InvalidInput("learning rate must be positive");
  if (config.max_steps < 1) throw InvalidInput("max steps must be at least 1");
  if (config.convergence_window < 1) throw InvalidInput("convergence window must be at least 1");
  if (!(config.convergence_tolerance > 0.0)) {
    throw InvalidInput("convergence tolerance must be positive");
  }
}

void validate_problem(const InterventionProblem& problem) {
  if (problem.net == nullptr) throw InvalidInput("problem has no network");
  if (problem.sources.empty()) throw InvalidInput("source set is empty");
  if (problem.targets.empty()) throw InvalidInput("target set is empty");
}

struct InnerRun {
  Vector p_u;
  GradientReport last;
  std::vector<TrajectoryPoint> trajectory;
  bool window_converged = false;
  int steps = 0;
  double last_change = std::numeric_limits<double>::infinity();
};

InnerRun run_adam(const InterventionProblem& problem, const OptimizerConfig& config,
                  const Vector& start, double learning_rate, double rho, double alpha,
                  int outer) {
  const Index d = start.size();
  InnerRun run;
  run.p_u = start;

  Vector m = Vector::Zero(d);
  Vector v = Vector::Zero(d);
  double prev_total = 0.0;
  int streak = 0;

  for (int step = 1; step <= config.max_steps; ++step) {
    GradientReport report = evaluate_with_gradient(problem, run.p_u, rho, alpha);
    if (!std::isfinite(report.loss.total) || !report.gradient.allFinite()) {
      std::ostringstream msg;
      msg << "loss diverged at step " << step << " (lr=" << learning_rate << ")";
      throw Diverged(msg.str());
    }
    run.trajectory.push_back({outer, step, report.loss});
    run.steps = step;

    if (step > 1) {
      run.last_change = std::abs(report.loss.total - prev_total);
      streak = run.last_change < config.convergence_tolerance ? streak + 1 : 0;
    }
    prev_total = report.loss.total;
    run.last = std::move(report);

    if (streak >= config.convergence_window) {
      run.window_converged = true;
      break;
    }
    if (step == config.max_steps) break;

    // Adam with bias correction; epsilon sits outside the square root.
    const Vector& g = run.last.gradient;
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g.cwiseAbs2();
    const double m_corr = 1.0 - std::pow(config.beta1, step);
    const double v_corr = 1.0 - std::pow(config.beta2, step);
    run.p_u.array() -= learning_rate * (m.array() / m_corr) /
                       ((v.array() / v_corr).sqrt() + config.epsilon);
  }
  return run;
}

// One run at the configured rate, falling back to the remaining rates of
// {1, 0.1, 0.001} when a run diverges or stops at the cap with the loss
// still moving. Returns the first windowed (or settled) run, otherwise the
// completed run with the lowest loss.
InnerRun run_with_retry(const InterventionProblem& problem, const OptimizerConfig& config,
                        const Vector& start, double rho, double alpha, int outer,
                        double* learning_rate_used) {
  constexpr double kSettledRelChange = 1e-4;

  std::vector<double> rates{config.learning_rate};
  if (config.auto_retry_learning_rate) {
    for (double r : {1.0, 0.1, 0.001}) {
      if (r != config.learning_rate) rates.push_back(r);
    }
  }

  bool have_fallback = false;
  InnerRun fallback;
  double fallback_rate = 0.0;
  std::string last_error;
  for (double rate : rates) {
    InnerRun run;
    try {
      run = run_adam(problem, config, start, rate, rho, alpha, outer);
    } catch (const Diverged& e) {
      last_error = e.what();
      continue;
    }
    const double scale = std::max(std::abs(run.last.loss.total), 1e-12);
    if (run.window_converged || run.last_change / scale <= kSettledRelChange) {
      *learning_rate_used = rate;
      return run;
    }
    if (!have_fallback || run.last.loss.total < fallback.last.loss.total) {
      have_fallback = true;
      fallback = std::move(run);
      fallback_rate = rate;
    }
  }
  if (have_fallback) {
    *learning_rate_used = fallback_rate;
    return fallback;
  }
  throw Diverged("all learning rates diverged: " + last_error);
}

OptimizationResult finalize(const InterventionProblem& problem, InnerRun&& run,
                            double learning_rate_used, std::uint64_t seed) {
  OptimizationResult result;
  result.o = std::move(run.last.o);
  result.p_u = std::move(run.p_u);
  result.control = std::move(run.last.control);
  result.final_loss = run.last.loss;
  result.trajectory = std::move(run.trajectory);
  result.converged = run.window_converged;
  result.reason = run.window_converged ? StopReason::ConvergenceWindow : StopReason::StepCap;
  result.steps = run.steps;
  result.learning_rate_used = learning_rate_used;
  result.seed = seed;
  result.final_constraint = result.final_loss.constraint;
  return result;
}

Vector starting_point(const InterventionProblem& problem, const OptimizerConfig& config) {
  if (config.start) {
    if (config.start->size() != problem.sources.size()) {
      throw InvalidInput("start vector length does not match source count");
    }
    return *config.start;
  }
  return init_params(config.init, problem, config.seed, std::nullopt, config.init_mean,
                     config.init_stddev)
      .p_u;
}

}  // namespace

AgentParams init_params(InitScheme scheme, const InterventionProblem& problem, std::uint64_t seed,
                        std::optional<double> budget_hint, double mean, double stddev) {
  validate_problem(problem);
  const Index d = problem.sources.size();
  AgentParams params;
  params.p_u.resize(d);

  if (scheme == InitScheme::Gaussian) {
    Rng rng(seed);
    for (Index k = 0; k < d; ++k) params.p_u(k) = rng.normal(mean, stddev);
    return params;
  }

  double budget = 0.0;
  if (problem.loss.mode == LossMode::Budget) {
    budget = problem.loss.budget;
  } else if (budget_hint) {
    budget = *budget_hint;
  } else {
    throw InvalidInput("budget_estimate init needs a budget");
  }

  // Spread the budget uniformly over the sources and invert the sigmoid;
  // fractions are clipped away from {0, 1} to keep the parameters finite.
  constexpr double kClip = 1e-6;
  for (Index k = 0; k < d; ++k) {
    const Index j = problem.sources.indices[static_cast<std::size_t>(k)];
    const double value = problem.network().values()(j);
    const double o_max = problem.o_max(j);
    double target = value > 0.0 ? std::min(o_max, budget / (static_cast<double>(d) * value))
                                : o_max;
    double fraction = target / o_max;
    fraction = std::min(1.0 - kClip, std::max(kClip, fraction));
    params.p_u(k) = logit(fraction);
  }
  return params;
}

OptimizationResult optimize(const InterventionProblem& problem, const OptimizerConfig& config) {
  validate_problem(problem);
  validate_config(config);
  if (problem.loss.mode != LossMode::Lambda) {
    throw InvalidInput("optimize expects a lambda-mode problem; use optimize_budget");
  }

  const auto t0 = std::chrono::steady_clock::now();
  const Vector start = starting_point(problem, config);
  double learning_rate_used = config.learning_rate;
  InnerRun run = run_with_retry(problem, config, start, 1.0, 0.0, 0, &learning_rate_used);
  OptimizationResult result = finalize(problem, std::move(run), learning_rate_used, config.seed);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::vector<SweepPoint> lambda_sweep(const InterventionProblem& problem,
                                     const std::vector<double>& grid,
                                     const OptimizerConfig& config, bool warm_start) {
  validate_problem(problem);
  if (grid.empty()) throw InvalidInput("lambda grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0) throw InvalidInput("lambda must be non-negative");
    if (i > 0 && grid[i] < grid[i - 1]) throw InvalidInput("lambda grid must be sorted ascending");
  }

  std::vector<SweepPoint> points;
  points.reserve(grid.size());
  const Vector* previous = nullptr;
  for (double lambda : grid) {
    InterventionProblem sub = problem;
    sub.loss.mode = LossMode::Lambda;
    sub.loss.lambda = lambda;

    OptimizerConfig sub_config = config;
    // Independent stream per lambda value: repeated values repeat results.
    sub_config.seed = mix_seed(config.seed, std::bit_cast<std::uint64_t>(lambda));
    if (warm_start && previous != nullptr) sub_config.start = *previous;

    SweepPoint point;
    point.lambda = lambda;
    try {
      point.result = optimize(sub, sub_config);
      point.ok = true;
      points.push_back(std::move(point));
      previous = &points.back().result.p_u;
    } catch (const std::exception& e) {
      point.ok = false;
      point.error = e.what();
      points.push_back(std::move(point));
    }
  }
  return points;
}

OptimizationResult optimize_budget(const InterventionProblem& problem, const ALConfig& al,
                                   const OptimizerConfig& config) {
  validate_problem(problem);
  validate_config(config);
  if (problem.loss.mode != LossMode::Budget) {
    throw InvalidInput("optimize_budget expects a budget-mode problem");
  }
  if (!(al.initial_rho > 0.0)) throw InvalidInput("initial rho must be positive");
  if (al.initial_alpha < 0.0) throw InvalidInput("initial alpha must be non-negative");
  if (!(al.rho_growth > 1.0)) throw InvalidInput("rho growth factor must exceed 1");
  if (!(al.violation_shrink_threshold > 0.0 && al.violation_shrink_threshold < 1.0)) {
    throw InvalidInput("violation shrink threshold must lie in (0,1)");
  }
  if (al.max_outer_iterations < 1) throw InvalidInput("outer iteration cap must be at least 1");

  const auto t0 = std::chrono::steady_clock::now();
  const double tolerance = al.tolerance_for(problem.loss.budget);

  Vector p_u = starting_point(problem, config);
  double rho = al.initial_rho;
  double alpha = al.initial_alpha;
  double previous_violation = std::numeric_limits<double>::infinity();

  std::vector<TrajectoryPoint> trajectory;
  OptimizationResult result;
  double learning_rate_used = config.learning_rate;
  for (int outer = 0; outer < al.max_outer_iterations; ++outer) {
    OptimizerConfig inner_config = config;
    InnerRun run = run_with_retry(problem, inner_config, p_u, rho, alpha, outer,
                                  &learning_rate_used);
    p_u = run.p_u;
    trajectory.insert(trajectory.end(), run.trajectory.begin(), run.trajectory.end());

    const double violation = std::abs(run.last.loss.constraint);
    result = finalize(problem, std::move(run), learning_rate_used, config.seed);
    result.outer_iterations = outer + 1;

    if (violation <= tolerance) break;

    // Multiplier update, then stiffen the penalty whenever the violation
    // failed to shrink enough.
    alpha += rho * violation;
    if (outer > 0 && violation > al.violation_shrink_threshold * previous_violation) {
      rho *= al.rho_growth;
    }
    previous_violation = violation;
  }

  result.trajectory = std::move(trajectory);
  result.feasible = std::abs(result.final_constraint) <= tolerance;
  result.converged = result.feasible;
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace netcontrol
