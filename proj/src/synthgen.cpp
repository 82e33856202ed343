#include "netcontrol/synthgen.hpp"

#include "netcontrol/rng.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace netcontrol {

OwnershipNetwork generate_extended_star(const StarSpec& spec) {
  if (spec.depth < 1) throw InvalidInput("star depth must be at least 1");
  if (spec.num_stars < 1) throw InvalidInput("star count must be at least 1");
  if (spec.branching.empty()) throw InvalidInput("branching list is empty");
  for (int b : spec.branching) {
    if (b < 1) throw InvalidInput("branching factor must be at least 1");
  }

  Rng rng(spec.seed);
  std::vector<std::string> ids;
  std::vector<std::string> level_attr;
  std::vector<std::string> star_attr;
  std::vector<double> values;
  struct Edge {
    std::size_t parent, child;
    double weight;
  };
  std::vector<Edge> edges;

  const auto branching_at = [&spec](int depth) {
    const std::size_t k = std::min(static_cast<std::size_t>(depth), spec.branching.size() - 1);
    return spec.branching[k];
  };

  for (int star = 0; star < spec.num_stars; ++star) {
    std::vector<std::size_t> frontier;
    for (int depth = 0; depth <= spec.depth; ++depth) {
      std::vector<std::size_t> next;
      const double value = std::pow(2.0, spec.depth - depth + 1);
      if (depth == 0) {
        ids.push_back(std::to_string(ids.size()));
        level_attr.push_back("0");
        star_attr.push_back(std::to_string(star));
        values.push_back(value);
        next.push_back(ids.size() - 1);
      } else {
        for (std::size_t parent : frontier) {
          for (int child = 0; child < branching_at(depth - 1); ++child) {
            ids.push_back(std::to_string(ids.size()));
            level_attr.push_back(std::to_string(depth));
            star_attr.push_back(std::to_string(star));
            values.push_back(value);
            next.push_back(ids.size() - 1);
            edges.push_back({parent, ids.size() - 1, rng.uniform_open()});
          }
        }
      }
      frontier = std::move(next);
    }
  }

  const Index n = static_cast<Index>(ids.size());
  Vector value_vec(n);
  for (Index i = 0; i < n; ++i) value_vec(i) = values[static_cast<std::size_t>(i)];
  Matrix adj = Matrix::Zero(n, n);
  for (const Edge& e : edges) {
    adj(static_cast<Index>(e.parent), static_cast<Index>(e.child)) = e.weight;
  }

  std::map<std::string, std::vector<std::string>> attributes;
  attributes.emplace("level", std::move(level_attr));
  attributes.emplace("star", std::move(star_attr));
  return OwnershipNetwork(std::move(ids), std::move(value_vec), std::move(adj),
                          std::move(attributes));
}

OwnershipNetwork generate_random_dag(int n, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("node count must be at least 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw InvalidInput("edge probability outside [0,1]");
  }

  Rng rng(seed);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  rng.shuffle(order);

  Matrix adj = Matrix::Zero(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      if (rng.uniform() < edge_prob) {
        adj(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]) =
            rng.uniform_open();
      }
    }
  }
  for (Index j = 0; j < n; ++j) {
    const double sum = adj.col(j).sum();
    if (sum > 1.0) adj.col(j) /= sum;
  }

  std::vector<std::string> ids(static_cast<std::size_t>(n));
  Vector values(n);
  for (Index i = 0; i < n; ++i) {
    ids[static_cast<std::size_t>(i)] = std::to_string(i);
    values(i) = 10.0 * rng.uniform();
  }
  return OwnershipNetwork(std::move(ids), std::move(values), std::move(adj));
}

}  // namespace netcontrol
