#include "netcontrol/backbone.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <vector>

namespace netcontrol {

namespace {

constexpr double kBoundTolerance = 1e-12;
constexpr double kResidualTolerance = 1e-8;

std::vector<Index> support(const Eigen::Ref<const Vector>& o) {
  std::vector<Index> s;
  for (Index j = 0; j < o.size(); ++j) {
    if (o(j) != 0.0) s.push_back(j);
  }
  return s;
}

std::vector<char> forward_reachable(const Matrix& adj, const std::vector<Index>& start) {
  const Index n = adj.rows();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::deque<Index> queue;
  for (Index s : start) {
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const Index u = queue.front();
    queue.pop_front();
    for (Index v = 0; v < n; ++v) {
      if (adj(u, v) > 0.0 && !seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

// Iterative Tarjan over the nonzero structure.
std::vector<std::vector<Index>> strongly_connected_components(const Matrix& adj) {
  const Index n = adj.rows();
  std::vector<std::vector<Index>> succ(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (adj(i, j) > 0.0) succ[static_cast<std::size_t>(i)].push_back(j);
    }
  }

  std::vector<Index> number(static_cast<std::size_t>(n), -1);
  std::vector<Index> low(static_cast<std::size_t>(n), -1);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<Index> stack;
  std::vector<std::vector<Index>> components;
  Index counter = 0;

  struct Frame {
    Index node;
    std::size_t next_edge;
  };
  for (Index root = 0; root < n; ++root) {
    if (number[static_cast<std::size_t>(root)] != -1) continue;
    std::vector<Frame> call_stack{{root, 0}};
    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      const auto u = static_cast<std::size_t>(frame.node);
      if (frame.next_edge == 0) {
        number[u] = low[u] = counter++;
        stack.push_back(frame.node);
        on_stack[u] = 1;
      }
      bool descended = false;
      while (frame.next_edge < succ[u].size()) {
        const Index v = succ[u][frame.next_edge++];
        const auto vi = static_cast<std::size_t>(v);
        if (number[vi] == -1) {
          call_stack.push_back({v, 0});
          descended = true;
          break;
        }
        if (on_stack[vi]) low[u] = std::min(low[u], number[vi]);
      }
      if (descended) continue;
      if (low[u] == number[u]) {
        std::vector<Index> component;
        Index v;
        do {
          v = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(v)] = 0;
          component.push_back(v);
        } while (v != frame.node);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
      const Index done = frame.node;
      call_stack.pop_back();
      if (!call_stack.empty()) {
        const auto p = static_cast<std::size_t>(call_stack.back().node);
        low[p] = std::min(low[p], low[static_cast<std::size_t>(done)]);
      }
    }
  }
  return components;
}

// A cycle keeps (I - B) singular when no ownership leaks out of it: every
// column of the component, restricted to the component, sums to ~1.
// `ids` aligns matrix indices with node identifiers.
std::vector<std::string> offending_component(const Matrix& adjusted,
                                             const std::vector<std::string>& ids) {
  std::vector<std::string> fallback;
  for (const auto& component : strongly_connected_components(adjusted)) {
    if (component.size() < 2) continue;
    double min_internal = 2.0;
    for (Index j : component) {
      double internal = 0.0;
      for (Index i : component) internal += adjusted(i, j);
      min_internal = std::min(min_internal, internal);
    }
    std::vector<std::string> named;
    named.reserve(component.size());
    for (Index i : component) named.push_back(ids[static_cast<std::size_t>(i)]);
    if (min_internal >= 1.0 - 1e-9) return named;
    if (fallback.empty()) fallback = std::move(named);
  }
  return fallback;
}

[[noreturn]] void throw_singular(const Matrix& adjusted, const std::vector<std::string>& ids) {
  std::vector<std::string> component = offending_component(adjusted, ids);
  std::ostringstream msg;
  msg << "ownership propagation is singular: a cycle retains all ownership";
  if (!component.empty()) {
    msg << " (nodes";
    for (const std::string& id : component) msg << " " << id;
    msg << ")";
  }
  throw SingularOwnership(msg.str(), std::move(component));
}

}  // namespace

Matrix adjust_ownership(const OwnershipNetwork& net, const Eigen::Ref<const Vector>& o) {
  const Index n = net.size();
  if (o.size() != n) throw InvalidInput("intervention vector length does not match network");
  Matrix adjusted = net.adjacency();
  for (Index j = 0; j < n; ++j) {
    const double s = net.column_sums()(j);
    const double o_max = s == 0.0 ? 1.0 : std::min(1.0, s);
    if (!(o(j) >= -kBoundTolerance && o(j) <= o_max + kBoundTolerance)) {
      std::ostringstream msg;
      msg << "intervention o=" << o(j) << " outside [0, " << o_max << "] at node " << net.id(j);
      throw InvalidInput(msg.str());
    }
    if (o(j) != 0.0) adjusted.col(j) *= 1.0 - o(j);
  }
  return adjusted;
}

PropagationSolve::PropagationSolve(const OwnershipNetwork& net,
                                   const Eigen::Ref<const Matrix>& adjusted)
    : net_(&net), adjusted_(adjusted) {
  const Index n = net.size();
  if (adjusted_.rows() != n || adjusted_.cols() != n) {
    throw InvalidInput("propagate: dimension mismatch");
  }
  system_ = Matrix::Identity(n, n) - adjusted_.transpose();
  lu_.compute(system_);
}

ControlVector PropagationSolve::forward(const Eigen::Ref<const Vector>& o) const {
  const Index n = net_->size();
  if (o.size() != n) throw InvalidInput("propagate: dimension mismatch");

  // c solves (I - B^T) c = o; the l=0 identity term carries the direct part.
  Vector c = lu_.solve(o);
  if (!c.allFinite() || (system_ * c - o).cwiseAbs().maxCoeff() > kResidualTolerance) {
    throw_singular(adjusted_, net_->ids());
  }

  // Unreachable nodes hold exactly zero control.
  const std::vector<char> reachable = forward_reachable(net_->adjacency(), support(o));
  for (Index j = 0; j < n; ++j) {
    if (!reachable[static_cast<std::size_t>(j)]) c(j) = 0.0;
  }

  return ControlVector{std::move(c), o};
}

Vector PropagationSolve::adjoint(const Eigen::Ref<const Vector>& g) const {
  if (g.size() != net_->size()) throw InvalidInput("adjoint: dimension mismatch");
  Vector y = lu_.transpose().solve(g);
  if (!y.allFinite() || (system_.transpose() * y - g).cwiseAbs().maxCoeff() > kResidualTolerance) {
    throw_singular(adjusted_, net_->ids());
  }
  return y;
}

ControlVector propagate(const OwnershipNetwork& net, const Eigen::Ref<const Matrix>& adjusted,
                        const Eigen::Ref<const Vector>& o) {
  return PropagationSolve(net, adjusted).forward(o);
}

ControlVector propagate_bruteforce(const OwnershipNetwork& net,
                                   const Eigen::Ref<const Matrix>& adjusted,
                                   const Eigen::Ref<const Vector>& o, int max_len) {
  const Index n = net.size();
  if (adjusted.rows() != n || adjusted.cols() != n || o.size() != n) {
    throw InvalidInput("propagate_bruteforce: dimension mismatch");
  }
  if (max_len < 0) throw InvalidInput("propagate_bruteforce: negative path length");

  Vector term = o;
  Vector c = o;
  for (int l = 1; l <= max_len; ++l) {
    term = adjusted.transpose() * term;
    c += term;
  }
  return ControlVector{std::move(c), o};
}

Vector pairwise_control(const OwnershipNetwork& net, Index source) {
  const Index n = net.size();
  if (source < 0 || source >= n) throw InvalidInput("pairwise_control: source out of range");

  const std::vector<char> reachable = forward_reachable(net.adjacency(), {source});
  std::vector<Index> nodes;
  for (Index j = 0; j < n; ++j) {
    if (reachable[static_cast<std::size_t>(j)]) nodes.push_back(j);
  }
  const Index m = static_cast<Index>(nodes.size());

  Matrix restricted(m, m);
  Index local_source = 0;
  for (Index a = 0; a < m; ++a) {
    if (nodes[static_cast<std::size_t>(a)] == source) local_source = a;
    for (Index b = 0; b < m; ++b) {
      restricted(a, b) =
          net.adjacency()(nodes[static_cast<std::size_t>(a)], nodes[static_cast<std::size_t>(b)]);
    }
  }
  restricted.col(local_source).setZero();  // drop the source's incoming edges

  // Row `source` of (I - B)^{-1}: solve (I - B)^T x = e_source.
  Matrix system = Matrix::Identity(m, m) - restricted;
  Eigen::PartialPivLU<Matrix> lu(system);
  Vector rhs = Vector::Zero(m);
  rhs(local_source) = 1.0;
  Vector x = lu.transpose().solve(rhs);

  if (!x.allFinite() || (system.transpose() * x - rhs).cwiseAbs().maxCoeff() > kResidualTolerance) {
    std::vector<std::string> local_ids;
    local_ids.reserve(nodes.size());
    for (Index j : nodes) local_ids.push_back(net.id(j));
    throw_singular(restricted, local_ids);
  }

  Vector row = Vector::Zero(n);
  for (Index a = 0; a < m; ++a) row(nodes[static_cast<std::size_t>(a)]) = x(a);
  return row;
}

}  // namespace netcontrol
