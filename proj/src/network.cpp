#include "netcontrol/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

namespace netcontrol {

namespace {

std::vector<std::vector<Index>> out_edges(const Matrix& adj) {
  const Index n = adj.rows();
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (adj(i, j) > 0.0) out[static_cast<std::size_t>(i)].push_back(j);
    }
  }
  return out;
}

std::vector<std::vector<Index>> in_edges(const Matrix& adj) {
  const Index n = adj.rows();
  std::vector<std::vector<Index>> in(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (adj(i, j) > 0.0) in[static_cast<std::size_t>(j)].push_back(i);
    }
  }
  return in;
}

std::vector<Index> bfs(const std::vector<std::vector<Index>>& edges,
                       const std::vector<Index>& start) {
  std::vector<char> seen(edges.size(), 0);
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
    for (Index v : edges[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        queue.push_back(v);
      }
    }
  }
  std::vector<Index> result;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) result.push_back(static_cast<Index>(i));
  }
  return result;
}

}  // namespace

OwnershipNetwork::OwnershipNetwork(std::vector<std::string> ids, Vector values, Matrix adjacency,
                                   std::map<std::string, std::vector<std::string>> attributes,
                                   const NetworkOptions& options)
    : ids_(std::move(ids)),
      values_(std::move(values)),
      adj_(std::move(adjacency)),
      attributes_(std::move(attributes)) {
  const Index n = static_cast<Index>(ids_.size());
  if (values_.size() != n) {
    throw InvalidInput("node value count does not match node count");
  }
  if (adj_.rows() != n || adj_.cols() != n) {
    throw InvalidInput("adjacency dimensions do not match node count");
  }

  index_.reserve(ids_.size());
  for (Index i = 0; i < n; ++i) {
    const std::string& id = ids_[static_cast<std::size_t>(i)];
    if (id.empty()) throw InvalidInput("empty node id");
    if (!index_.emplace(id, i).second) {
      throw InvalidInput("duplicate node id: " + id);
    }
  }

  for (Index i = 0; i < n; ++i) {
    const double v = values_(i);
    if (!std::isfinite(v)) throw InvalidInput("non-finite value at node " + ids_[i]);
    if (v < 0.0) throw InvalidInput("negative value at node " + ids_[i]);
  }

  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double a = adj_(i, j);
      if (!std::isfinite(a) || a < 0.0 || a > 1.0) {
        throw InvalidInput("edge weight outside [0,1] on " + ids_[i] + " -> " + ids_[j]);
      }
    }
    if (adj_(j, j) != 0.0) {
      throw InvalidInput("self-loop at node " + ids_[j]);
    }
  }

  column_sums_ = adj_.colwise().sum().transpose();
  for (Index j = 0; j < n; ++j) {
    if (column_sums_(j) > 1.0) {
      if (options.normalize_columns) {
        adj_.col(j) /= column_sums_(j);
        column_sums_(j) = 1.0;
      } else if (column_sums_(j) > 1.0 + options.column_sum_tolerance) {
        std::ostringstream msg;
        msg << "incoming weights of node " << ids_[j] << " sum to " << column_sums_(j)
            << " (> 1); pass --normalize-columns to rescale";
        throw InvalidInput(msg.str());
      }
    }
  }

  for (const auto& [key, column] : attributes_) {
    if (key.empty() || key == "id" || key == "value") {
      throw InvalidInput("invalid attribute key: '" + key + "'");
    }
    if (column.size() != ids_.size()) {
      throw InvalidInput("attribute '" + key + "' length does not match node count");
    }
  }
}

std::optional<Index> OwnershipNetwork::find(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Index OwnershipNetwork::index_of(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw InvalidInput("unknown node id: " + id);
  return it->second;
}

bool OwnershipNetwork::has_attribute(const std::string& key) const {
  return attributes_.count(key) > 0;
}

const std::vector<std::string>& OwnershipNetwork::attribute(const std::string& key) const {
  const auto it = attributes_.find(key);
  if (it == attributes_.end()) throw InvalidInput("unknown attribute key: " + key);
  return it->second;
}

bool NodeSelection::contains(Index i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

NodeSelection select_all(const OwnershipNetwork& net) {
  NodeSelection sel;
  sel.indices.resize(static_cast<std::size_t>(net.size()));
  for (Index i = 0; i < net.size(); ++i) sel.indices[static_cast<std::size_t>(i)] = i;
  sel.provenance = "all";
  return sel;
}

NodeSelection select_by_ids(const OwnershipNetwork& net, const std::vector<std::string>& ids) {
  std::set<Index> unique;
  for (const std::string& id : ids) unique.insert(net.index_of(id));
  NodeSelection sel;
  sel.indices.assign(unique.begin(), unique.end());
  sel.provenance = "explicit";
  return sel;
}

NodeSelection select_by_attribute(const OwnershipNetwork& net, const std::string& key,
                                  const std::string& value, bool complement) {
  const std::vector<std::string>& column = net.attribute(key);
  NodeSelection sel;
  for (Index i = 0; i < net.size(); ++i) {
    const bool match = column[static_cast<std::size_t>(i)] == value;
    if (match != complement) sel.indices.push_back(i);
  }
  sel.provenance = (complement ? "complement(" : "attr(") + key + "=" + value + ")";
  return sel;
}

NodeSelection selection_difference(const NodeSelection& base, const NodeSelection& removed) {
  NodeSelection sel;
  std::set_difference(base.indices.begin(), base.indices.end(), removed.indices.begin(),
                      removed.indices.end(), std::back_inserter(sel.indices));
  sel.provenance = base.provenance + " minus " + removed.provenance;
  return sel;
}

Vector compute_o_max(const OwnershipNetwork& net) {
  Vector o_max(net.size());
  for (Index j = 0; j < net.size(); ++j) {
    const double s = net.column_sums()(j);
    // Root nodes have no owners; by convention all of their stock is on offer.
    o_max(j) = s == 0.0 ? 1.0 : std::min(1.0, s);
  }
  return o_max;
}

NodeSelection in_component(const OwnershipNetwork& net, const NodeSelection& targets) {
  if (targets.empty()) throw InvalidInput("in_component: empty target set");
  NodeSelection sel;
  sel.indices = bfs(in_edges(net.adjacency()), targets.indices);
  sel.provenance = "in_component(" + targets.provenance + ")";
  return sel;
}

NodeSelection reachable_from_sources(const OwnershipNetwork& net, const NodeSelection& sources) {
  NodeSelection sel;
  sel.indices = bfs(out_edges(net.adjacency()), sources.indices);
  sel.provenance = "reachable(" + sources.provenance + ")";
  return sel;
}

OwnershipNetwork subnetwork(const OwnershipNetwork& net, const NodeSelection& keep) {
  const Index m = keep.size();
  std::vector<std::string> ids(static_cast<std::size_t>(m));
  Vector values(m);
  Matrix adj(m, m);
  for (Index a = 0; a < m; ++a) {
    const Index i = keep.indices[static_cast<std::size_t>(a)];
    ids[static_cast<std::size_t>(a)] = net.id(i);
    values(a) = net.values()(i);
    for (Index b = 0; b < m; ++b) {
      adj(a, b) = net.adjacency()(i, keep.indices[static_cast<std::size_t>(b)]);
    }
  }
  std::map<std::string, std::vector<std::string>> attributes;
  for (const auto& [key, column] : net.attributes()) {
    std::vector<std::string> sliced(static_cast<std::size_t>(m));
    for (Index a = 0; a < m; ++a) {
      sliced[static_cast<std::size_t>(a)] =
          column[static_cast<std::size_t>(keep.indices[static_cast<std::size_t>(a)])];
    }
    attributes.emplace(key, std::move(sliced));
  }
  return OwnershipNetwork(std::move(ids), std::move(values), std::move(adj),
                          std::move(attributes));
}

OwnershipNetwork largest_connected_component(const OwnershipNetwork& net) {
  const Index n = net.size();
  const auto out = out_edges(net.adjacency());
  const auto in = in_edges(net.adjacency());

  std::vector<Index> component(static_cast<std::size_t>(n), -1);
  Index n_components = 0;
  for (Index s = 0; s < n; ++s) {
    if (component[static_cast<std::size_t>(s)] != -1) continue;
    const Index label = n_components++;
    std::deque<Index> queue{s};
    component[static_cast<std::size_t>(s)] = label;
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop_front();
      for (const auto* edges : {&out, &in}) {
        for (Index v : (*edges)[static_cast<std::size_t>(u)]) {
          if (component[static_cast<std::size_t>(v)] == -1) {
            component[static_cast<std::size_t>(v)] = label;
            queue.push_back(v);
          }
        }
      }
    }
  }

  // Largest component; ties go to the one seen first, i.e. the one holding
  // the smallest node index.
  std::vector<Index> sizes(static_cast<std::size_t>(n_components), 0);
  for (Index i = 0; i < n; ++i) ++sizes[static_cast<std::size_t>(component[i])];
  Index best = 0;
  for (Index c = 1; c < n_components; ++c) {
    if (sizes[static_cast<std::size_t>(c)] > sizes[static_cast<std::size_t>(best)]) best = c;
  }

  NodeSelection keep;
  for (Index i = 0; i < n; ++i) {
    if (component[static_cast<std::size_t>(i)] == best) keep.indices.push_back(i);
  }
  keep.provenance = "largest_connected_component";
  return subnetwork(net, keep);
}

}  // namespace netcontrol
