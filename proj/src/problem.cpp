#include "netcontrol/problem.hpp"

#include <algorithm>

namespace netcontrol {

namespace {

void validate_selection(const OwnershipNetwork& net, NodeSelection& sel, const char* name) {
  std::sort(sel.indices.begin(), sel.indices.end());
  sel.indices.erase(std::unique(sel.indices.begin(), sel.indices.end()), sel.indices.end());
  for (Index i : sel.indices) {
    if (i < 0 || i >= net.size()) {
      throw InvalidInput(std::string(name) + " selection index out of range");
    }
  }
}

}  // namespace

InterventionProblem InterventionProblem::make(const OwnershipNetwork& net, NodeSelection sources,
                                              NodeSelection targets, LossConfig loss) {
  validate_selection(net, sources, "source");
  validate_selection(net, targets, "target");
  if (loss.mode == LossMode::Lambda && loss.lambda < 0.0) {
    throw InvalidInput("lambda must be non-negative");
  }
  if (loss.mode == LossMode::Budget) {
    if (loss.budget < 0.0) throw InvalidInput("budget must be non-negative");
    if (loss.cost != CostVariant::Value) {
      throw InvalidInput("budget mode constrains the value-weighted cost; use --cost value");
    }
  }
  InterventionProblem problem;
  problem.net = &net;
  problem.sources = std::move(sources);
  problem.targets = std::move(targets);
  problem.loss = loss;
  problem.o_max = compute_o_max(net);
  return problem;
}

Vector scatter_to_network(const Eigen::Ref<const Vector>& on_sources, const NodeSelection& sources,
                          Index n) {
  if (on_sources.size() != sources.size()) {
    throw InvalidInput("scatter: vector length does not match selection");
  }
  Vector full = Vector::Zero(n);
  for (Index k = 0; k < sources.size(); ++k) {
    full(sources.indices[static_cast<std::size_t>(k)]) = on_sources(k);
  }
  return full;
}

Vector gather_from_network(const Eigen::Ref<const Vector>& full, const NodeSelection& sources) {
  Vector out(sources.size());
  for (Index k = 0; k < sources.size(); ++k) {
    out(k) = full(sources.indices[static_cast<std::size_t>(k)]);
  }
  return out;
}

}  // namespace netcontrol
