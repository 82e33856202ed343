#pragma once

#include "netcontrol/network.hpp"

#include <cstdint>
#include <vector>

namespace netcontrol {

/// Rooted tree ("extended star") specification. Level d of the tree uses
/// branching[d] children per node (the last entry repeats when the list is
/// shorter than the depth). Node values follow v = 2^(D - d + 1) with the
/// root at depth 0, so the root carries the highest value and values halve
/// with every level. Edge weights are i.i.d. U(0,1).
struct StarSpec {
  int depth = 2;
  std::vector<int> branching = {3};
  int num_stars = 1;  ///< forest of independent stars
  std::uint64_t seed = 0;
};

/// Deterministic under the seed. Adds attributes "level" (depth as string)
/// and "star" (tree index).
OwnershipNetwork generate_extended_star(const StarSpec& spec);

/// Random DAG over a shuffled topological order: each forward pair gets an
/// edge with probability edge_prob and weight U(0,1); columns summing above 1
/// are rescaled to 1. Values are U(0,10). Test-instance generator.
OwnershipNetwork generate_random_dag(int n, double edge_prob, std::uint64_t seed);

}  // namespace netcontrol
