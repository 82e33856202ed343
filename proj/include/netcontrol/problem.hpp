#pragma once

#include "netcontrol/network.hpp"
#include "netcontrol/objective.hpp"
#include "netcontrol/types.hpp"

namespace netcontrol {

/// One optimization instance: a network, the nodes the agent may buy (S),
/// the nodes whose control it maximizes (T), and the loss configuration.
/// Holds a non-owning pointer to the immutable network.
struct InterventionProblem {
  const OwnershipNetwork* net = nullptr;
  NodeSelection sources;
  NodeSelection targets;
  LossConfig loss;
  Vector o_max;  ///< full-length, cached at construction

  static InterventionProblem make(const OwnershipNetwork& net, NodeSelection sources,
                                  NodeSelection targets, LossConfig loss);

  const OwnershipNetwork& network() const { return *net; }
};

/// Expands a vector over S into a full-length vector (zero off S).
Vector scatter_to_network(const Eigen::Ref<const Vector>& on_sources, const NodeSelection& sources,
                          Index n);

/// Restricts a full-length vector to the entries of S.
Vector gather_from_network(const Eigen::Ref<const Vector>& full, const NodeSelection& sources);

}  // namespace netcontrol
