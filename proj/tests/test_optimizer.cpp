#include "netcontrol/optimizer.hpp"

#include "netcontrol/synthgen.hpp"

#include "support/helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace netcontrol;

namespace {

nc_test::Instance chain_instance(LossConfig config) {
  nc_test::Instance inst;
  inst.net = std::make_unique<OwnershipNetwork>(nc_test::make_chain());
  inst.problem = InterventionProblem::make(*inst.net, select_by_ids(*inst.net, {"1"}),
                                           select_by_ids(*inst.net, {"2"}), config);
  return inst;
}

nc_test::Instance star_instance(LossConfig config, int depth = 2, int branching = 2,
                                std::uint64_t seed = 11) {
  nc_test::Instance inst;
  StarSpec spec;
  spec.depth = depth;
  spec.branching = {branching};
  spec.seed = seed;
  inst.net = std::make_unique<OwnershipNetwork>(generate_extended_star(spec));
  inst.problem =
      InterventionProblem::make(*inst.net, select_all(*inst.net), select_all(*inst.net), config);
  return inst;
}

}  // namespace

TEST_CASE("init_params") {
  LossConfig lambda_mode;
  const nc_test::Instance inst = star_instance(lambda_mode);

  SUBCASE("gaussian draws are reproducible and centered at the mean") {
    const AgentParams a = init_params(InitScheme::Gaussian, inst.problem, 3);
    const AgentParams b = init_params(InitScheme::Gaussian, inst.problem, 3);
    CHECK(a.p_u == b.p_u);
    CHECK(a.p_u.size() == inst.problem.sources.size());
    CHECK(std::abs(a.p_u.mean() + 7.0) < 1e-3);
    CHECK((a.p_u.array() + 7.0).abs().maxCoeff() < 1e-2);
    const AgentParams c = init_params(InitScheme::Gaussian, inst.problem, 4);
    CHECK(a.p_u != c.p_u);
  }
  SUBCASE("budget estimate inverts the per-node fraction") {
    LossConfig budget_mode;
    budget_mode.mode = LossMode::Budget;
    const OwnershipNetwork& net = inst.problem.network();

    // Single source: target o = B / v, so B = v * o_max / 2 buys half.
    nc_test::Instance single;
    single.net = std::make_unique<OwnershipNetwork>(net);
    budget_mode.budget = net.values()(1) * compute_o_max(net)(1) / 2.0;
    single.problem = InterventionProblem::make(
        *single.net, select_by_ids(*single.net, {net.id(1)}),
        select_all(*single.net), budget_mode);
    const AgentParams params = init_params(InitScheme::BudgetEstimate, single.problem, 0);
    const Vector o = reparametrize(single.problem, params.p_u);
    CHECK(o(1) == doctest::Approx(compute_o_max(net)(1) / 2.0).epsilon(1e-9));
  }
  SUBCASE("zero budget pins the estimate at the clip floor") {
    LossConfig budget_mode;
    budget_mode.mode = LossMode::Budget;
    budget_mode.budget = 0.0;
    nc_test::Instance zero;
    zero.net = std::make_unique<OwnershipNetwork>(inst.problem.network());
    zero.problem = InterventionProblem::make(*zero.net, select_all(*zero.net),
                                             select_all(*zero.net), budget_mode);
    const AgentParams params = init_params(InitScheme::BudgetEstimate, zero.problem, 0);
    CHECK(params.p_u.maxCoeff() == doctest::Approx(std::log(1e-6 / (1.0 - 1e-6))));
  }
  SUBCASE("budget estimate without a budget is an error") {
    CHECK_THROWS_AS(init_params(InitScheme::BudgetEstimate, inst.problem, 0), InvalidInput);
    CHECK(init_params(InitScheme::BudgetEstimate, inst.problem, 0, 5.0).p_u.size() ==
          inst.problem.sources.size());
  }
}

TEST_CASE("optimize saturates the chain at lambda zero") {
  LossConfig config;
  config.lambda = 0.0;
  const nc_test::Instance inst = chain_instance(config);
  OptimizerConfig opt;
  opt.seed = 1;
  const OptimizationResult result = optimize(inst.problem, opt);
  CHECK(result.converged);
  CHECK(result.o(0) >= 1.0 - 1e-3);
  CHECK(result.control.total(1) >= 0.5 - 1e-3);
  CHECK(result.final_loss.constraint == 0.0);
  CHECK(result.steps <= opt.max_steps);
}

TEST_CASE("a huge lambda drives spending to zero") {
  LossConfig config;
  config.lambda = 1e6;
  const nc_test::Instance inst = chain_instance(config);
  OptimizerConfig opt;
  opt.seed = 1;
  const OptimizationResult result = optimize(inst.problem, opt);
  CHECK(result.final_loss.cost_loss <= 1e-3);
}

TEST_CASE("optimize rejects wrong modes and empty sets") {
  LossConfig budget;
  budget.mode = LossMode::Budget;
  budget.budget = 1.0;
  const nc_test::Instance inst = chain_instance(budget);
  OptimizerConfig opt;
  CHECK_THROWS_AS(optimize(inst.problem, opt), InvalidInput);

  LossConfig lambda_mode;
  nc_test::Instance empty;
  empty.net = std::make_unique<OwnershipNetwork>(nc_test::make_chain());
  empty.problem.net = empty.net.get();
  empty.problem.sources = NodeSelection{};
  empty.problem.targets = select_all(*empty.net);
  empty.problem.loss = lambda_mode;
  empty.problem.o_max = compute_o_max(*empty.net);
  CHECK_THROWS_AS(optimize(empty.problem, opt), InvalidInput);
}

TEST_CASE("star saturates every bound at lambda zero") {
  LossConfig config;
  config.lambda = 0.0;
  const nc_test::Instance inst = star_instance(config);
  OptimizerConfig opt;
  opt.seed = 2;
  const OptimizationResult result = optimize(inst.problem, opt);
  for (Index j = 0; j < inst.net->size(); ++j) {
    CHECK(result.o(j) >= inst.problem.o_max(j) - 1e-3);
  }
}

TEST_CASE("identical config and seed give bitwise-identical runs") {
  LossConfig config;
  config.lambda = 0.5;
  const nc_test::Instance inst = star_instance(config);
  OptimizerConfig opt;
  opt.seed = 7;
  const OptimizationResult a = optimize(inst.problem, opt);
  const OptimizationResult b = optimize(inst.problem, opt);
  CHECK(a.o == b.o);
  CHECK(a.p_u == b.p_u);
  REQUIRE(a.trajectory.size() == b.trajectory.size());
  for (std::size_t t = 0; t < a.trajectory.size(); ++t) {
    CHECK(a.trajectory[t].loss.total == b.trajectory[t].loss.total);
  }
}

TEST_CASE("trajectory losses are finite and mostly decreasing") {
  LossConfig config;
  config.lambda = 0.5;
  const nc_test::Instance inst = star_instance(config, 2, 3, 13);
  OptimizerConfig opt;
  opt.seed = 5;
  const OptimizationResult result = optimize(inst.problem, opt);

  int windows = 0;
  int improving = 0;
  const auto& traj = result.trajectory;
  for (std::size_t t = 0; t + 50 < traj.size(); ++t) {
    REQUIRE(std::isfinite(traj[t].loss.total));
    ++windows;
    if (traj[t + 50].loss.total <= traj[t].loss.total) ++improving;
  }
  if (windows > 0) {
    CHECK(static_cast<double>(improving) >= 0.95 * static_cast<double>(windows));
  }
}

TEST_CASE("lambda_sweep orders results by lambda and repeats deterministically") {
  LossConfig config;
  config.lambda = 0.0;
  const nc_test::Instance inst = star_instance(config, 2, 2, 21);
  OptimizerConfig opt;
  opt.seed = 3;

  SUBCASE("control and cost both shrink with lambda") {
    const auto sweep = lambda_sweep(inst.problem, {0.5, 1.0}, opt);
    REQUIRE(sweep.size() == 2);
    REQUIRE(sweep[0].ok);
    REQUIRE(sweep[1].ok);
    CHECK(sweep[0].result.final_loss.control_loss < sweep[1].result.final_loss.control_loss);
    CHECK(sweep[0].result.final_loss.cost_loss > sweep[1].result.final_loss.cost_loss);
  }
  SUBCASE("single zero grid point equals a plain optimize run") {
    const auto sweep = lambda_sweep(inst.problem, {0.0}, opt);
    REQUIRE(sweep.size() == 1);
    REQUIRE(sweep[0].ok);
    const OptimizationResult direct = optimize(inst.problem, opt);
    CHECK(sweep[0].result.o == direct.o);
    CHECK(sweep[0].result.final_loss.total == direct.final_loss.total);
  }
  SUBCASE("a repeated lambda with the same seed repeats the result") {
    const auto sweep = lambda_sweep(inst.problem, {0.5, 0.5}, opt);
    REQUIRE(sweep.size() == 2);
    CHECK(sweep[0].result.o == sweep[1].result.o);
  }
  SUBCASE("grid validation") {
    CHECK_THROWS_AS(lambda_sweep(inst.problem, {}, opt), InvalidInput);
    CHECK_THROWS_AS(lambda_sweep(inst.problem, {1.0, 0.5}, opt), InvalidInput);
    CHECK_THROWS_AS(lambda_sweep(inst.problem, {-0.5, 1.0}, opt), InvalidInput);
  }
}

TEST_CASE("optimize_budget meets an equality budget on the chain") {
  LossConfig config;
  config.mode = LossMode::Budget;
  config.budget = 2.0;
  config.sense = ConstraintSense::Equality;
  const nc_test::Instance inst = chain_instance(config);
  OptimizerConfig opt;
  opt.seed = 1;
  ALConfig al;
  const OptimizationResult result = optimize_budget(inst.problem, al, opt);
  CHECK(result.feasible);
  CHECK(result.converged);
  CHECK(std::abs(result.final_loss.cost_loss - 2.0) <= 2e-3);
  CHECK(result.o(0) == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(result.control.total(1) == doctest::Approx(0.25).epsilon(5e-3));
  CHECK(result.outer_iterations >= 1);
}

TEST_CASE("zero budget under the inequality sense buys nothing") {
  LossConfig config;
  config.mode = LossMode::Budget;
  config.budget = 0.0;
  config.sense = ConstraintSense::Inequality;
  const nc_test::Instance inst = chain_instance(config);
  OptimizerConfig opt;
  opt.seed = 1;
  ALConfig al;
  const OptimizationResult result = optimize_budget(inst.problem, al, opt);
  CHECK(result.final_loss.cost_loss <= 1e-3);
  CHECK(result.control.total.maxCoeff() <= 1e-3);
}

TEST_CASE("a slack budget reproduces the unconstrained optimum") {
  LossConfig budget_config;
  budget_config.mode = LossMode::Budget;
  budget_config.sense = ConstraintSense::Inequality;
  nc_test::Instance inst = star_instance(budget_config, 2, 2, 31);
  const double max_spend = cost_value(inst.problem.o_max, *inst.net, inst.problem.sources);
  inst.problem.loss.budget = max_spend + 1.0;

  OptimizerConfig opt;
  opt.seed = 9;
  ALConfig al;
  const OptimizationResult constrained = optimize_budget(inst.problem, al, opt);
  CHECK(constrained.feasible);
  CHECK(constrained.outer_iterations == 1);

  LossConfig lambda_zero;
  lambda_zero.lambda = 0.0;
  const InterventionProblem unconstrained = InterventionProblem::make(
      *inst.net, inst.problem.sources, inst.problem.targets, lambda_zero);
  const OptimizationResult plain = optimize(unconstrained, opt);
  CHECK(constrained.final_loss.control_loss ==
        doctest::Approx(plain.final_loss.control_loss).epsilon(1e-3));
}

TEST_CASE("an unreachable equality budget is flagged infeasible") {
  LossConfig config;
  config.mode = LossMode::Budget;
  config.sense = ConstraintSense::Equality;
  nc_test::Instance inst = chain_instance(config);
  const double max_spend = cost_value(inst.problem.o_max, *inst.net, inst.problem.sources);
  inst.problem.loss.budget = max_spend + 3.0;

  OptimizerConfig opt;
  opt.seed = 1;
  ALConfig al;
  al.max_outer_iterations = 4;
  const OptimizationResult result = optimize_budget(inst.problem, al, opt);
  CHECK(!result.feasible);
  CHECK(!result.converged);
  CHECK(std::abs(result.final_constraint) > al.tolerance_for(inst.problem.loss.budget));
  CHECK(result.outer_iterations == 4);
}

TEST_CASE("optimizer reaches the grid-search optimum on small instances") {
  int matched = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    LossConfig config;
    config.lambda = seed == 0 ? 0.25 : 1.0;
    const nc_test::Instance inst = nc_test::random_instance(6, 0.5, seed + 40, config, 2);
    const nc_test::GridOptimum oracle = nc_test::grid_search_optimum(inst.problem, 1e-3);

    OptimizerConfig opt;
    opt.seed = seed;
    const OptimizationResult result = optimize(inst.problem, opt);
    CHECK(result.final_loss.total <= oracle.loss + 1e-2);
    CHECK(result.final_loss.total >= oracle.loss - 1e-2);
    ++matched;
  }
  CHECK(matched == 3);
}
