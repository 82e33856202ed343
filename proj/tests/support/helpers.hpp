#pragma once

#include "netcontrol/gradient.hpp"
#include "netcontrol/network.hpp"
#include "netcontrol/problem.hpp"
#include "netcontrol/rng.hpp"
#include "netcontrol/synthgen.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace nc_test {

using namespace netcontrol;

/// Scratch directory removed at scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("netcontrol_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// 2-node chain 1 -> 2 with weight 0.5 and values (4, 2).
inline OwnershipNetwork make_chain() {
  Matrix adj = Matrix::Zero(2, 2);
  adj(0, 1) = 0.5;
  Vector values(2);
  values << 4.0, 2.0;
  return OwnershipNetwork({"1", "2"}, values, adj);
}

/// 2-cycle with both weights 0.5 and unit values.
inline OwnershipNetwork make_two_cycle(double w = 0.5) {
  Matrix adj = Matrix::Zero(2, 2);
  adj(0, 1) = w;
  adj(1, 0) = w;
  return OwnershipNetwork({"1", "2"}, Vector::Ones(2), adj);
}

/// Random digraph that may contain cycles; columns rescaled to sum at most
/// `max_column_sum`. Independent of the library's DAG generator.
inline OwnershipNetwork random_digraph(int n, double edge_prob, std::uint64_t seed,
                                       double max_column_sum = 0.95) {
  Rng rng(seed);
  Matrix adj = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && rng.uniform() < edge_prob) adj(i, j) = rng.uniform_open();
    }
  }
  for (Index j = 0; j < n; ++j) {
    const double sum = adj.col(j).sum();
    if (sum > max_column_sum) adj.col(j) *= max_column_sum / sum;
  }
  std::vector<std::string> ids(static_cast<std::size_t>(n));
  Vector values(n);
  for (Index i = 0; i < n; ++i) {
    ids[static_cast<std::size_t>(i)] = std::to_string(i);
    values(i) = 10.0 * rng.uniform();
  }
  return OwnershipNetwork(std::move(ids), std::move(values), std::move(adj));
}

/// Random non-empty subset of the nodes.
inline NodeSelection random_subset(const OwnershipNetwork& net, Rng& rng, Index max_size = -1) {
  const Index n = net.size();
  if (max_size < 0 || max_size > n) max_size = n;
  const Index size = 1 + static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(max_size)));
  std::vector<Index> pool(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  rng.shuffle(pool);
  pool.resize(static_cast<std::size_t>(size));
  NodeSelection sel;
  sel.indices = std::move(pool);
  std::sort(sel.indices.begin(), sel.indices.end());
  sel.provenance = "random";
  return sel;
}

/// Keeps the network alive next to a problem that points into it.
struct Instance {
  std::unique_ptr<OwnershipNetwork> net;
  InterventionProblem problem;
};

inline Instance random_instance(int n, double edge_prob, std::uint64_t seed, LossConfig loss,
                                Index max_sources = -1) {
  Instance inst;
  inst.net = std::make_unique<OwnershipNetwork>(generate_random_dag(n, edge_prob, seed));
  Rng rng(mix_seed(seed, 1));
  NodeSelection sources = random_subset(*inst.net, rng, max_sources);
  NodeSelection targets = random_subset(*inst.net, rng);
  inst.problem = InterventionProblem::make(*inst.net, std::move(sources), std::move(targets), loss);
  return inst;
}

/// Random intervention with 0 <= o_j <= o_max_j on the sources.
inline Vector random_intervention(const InterventionProblem& problem, Rng& rng) {
  Vector o = Vector::Zero(problem.network().size());
  for (Index j : problem.sources.indices) o(j) = rng.uniform() * problem.o_max(j);
  return o;
}

/// O(n^3) boolean transitive closure; reference for reachability queries.
inline std::vector<std::vector<bool>> transitive_closure(const OwnershipNetwork& net) {
  const Index n = net.size();
  std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n),
                                       std::vector<bool>(static_cast<std::size_t>(n), false));
  for (Index i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (Index j = 0; j < n; ++j) {
      if (net.adjacency()(i, j) > 0.0) reach[i][j] = true;
    }
  }
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (Index j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  return reach;
}

struct GridOptimum {
  double loss = 0.0;
  Vector o;  ///< full-length
};

/// Brute-force global optimum of the lambda-mode loss over interventions
/// discretized with the given absolute step (boundary included). Supports
/// |S| in {1, 2}.
inline GridOptimum grid_search_optimum(const InterventionProblem& problem, double step = 1e-3) {
  const OwnershipNetwork& net = problem.network();
  const auto axis = [&](Index j) {
    std::vector<double> points;
    const double o_max = problem.o_max(j);
    for (double v = 0.0; v < o_max; v += step) points.push_back(v);
    points.push_back(o_max);
    return points;
  };
  const auto evaluate = [&](const Vector& o) {
    const Matrix adjusted = adjust_ownership(net, o);
    const ControlVector control = propagate(net, adjusted, o);
    return total_loss(control, o, net, problem.sources, problem.targets, problem.loss).total;
  };

  GridOptimum best;
  best.loss = std::numeric_limits<double>::infinity();
  Vector o = Vector::Zero(net.size());
  if (problem.sources.size() == 1) {
    const Index a = problem.sources.indices[0];
    for (double va : axis(a)) {
      o(a) = va;
      const double loss = evaluate(o);
      if (loss < best.loss) {
        best.loss = loss;
        best.o = o;
      }
    }
  } else if (problem.sources.size() == 2) {
    const Index a = problem.sources.indices[0];
    const Index b = problem.sources.indices[1];
    for (double va : axis(a)) {
      o(a) = va;
      for (double vb : axis(b)) {
        o(b) = vb;
        const double loss = evaluate(o);
        if (loss < best.loss) {
          best.loss = loss;
          best.o = o;
        }
      }
    }
  } else {
    throw InvalidInput("grid_search_optimum supports at most two sources");
  }
  return best;
}

}  // namespace nc_test
