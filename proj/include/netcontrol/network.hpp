#pragma once

#include "netcontrol/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace netcontrol {

struct NetworkOptions {
  /// Rescale columns whose incoming-weight sum exceeds 1 to sum exactly 1
  /// instead of rejecting the network. Off by default: silent rescaling of
  /// filing data must be requested explicitly.
  bool normalize_columns = false;
  double column_sum_tolerance = 1e-9;
};

/// Immutable weighted directed ownership graph.
///
/// adjacency()(i, j) = a_ij is the fraction of node j's equity held by node
/// i, so column j collects the owners of j and row i the holdings of i.
/// Node values are monetary (unit EUR 1M). Construction validates all
/// invariants: weights in [0, 1], no self-loops, column sums <= 1 (+tol),
/// unique ids, non-negative finite values.
class OwnershipNetwork {
 public:
  OwnershipNetwork(std::vector<std::string> ids, Vector values, Matrix adjacency,
                   std::map<std::string, std::vector<std::string>> attributes = {},
                   const NetworkOptions& options = {});

  Index size() const { return static_cast<Index>(ids_.size()); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(Index i) const { return ids_[static_cast<std::size_t>(i)]; }

  std::optional<Index> find(const std::string& id) const;
  /// Like find() but throws InvalidInput for unknown ids.
  Index index_of(const std::string& id) const;

  const Vector& values() const { return values_; }
  const Matrix& adjacency() const { return adj_; }
  /// Incoming-weight sum per node, cached at construction.
  const Vector& column_sums() const { return column_sums_; }

  const std::map<std::string, std::vector<std::string>>& attributes() const {
    return attributes_;
  }
  bool has_attribute(const std::string& key) const;
  const std::vector<std::string>& attribute(const std::string& key) const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index> index_;
  Vector values_;
  Matrix adj_;
  Vector column_sums_;
  std::map<std::string, std::vector<std::string>> attributes_;
};

/// Ordered, deduplicated node index set with a provenance tag describing how
/// it was built (explicit list, attribute predicate, complement, ...).
struct NodeSelection {
  std::vector<Index> indices;
  std::string provenance;

  bool empty() const { return indices.empty(); }
  Index size() const { return static_cast<Index>(indices.size()); }
  bool contains(Index i) const;
};

NodeSelection select_all(const OwnershipNetwork& net);
NodeSelection select_by_ids(const OwnershipNetwork& net, const std::vector<std::string>& ids);
/// Nodes whose attribute `key` equals `value`; with complement, all others.
/// Throws InvalidInput for unknown attribute keys.
NodeSelection select_by_attribute(const OwnershipNetwork& net, const std::string& key,
                                  const std::string& value, bool complement = false);
NodeSelection selection_difference(const NodeSelection& base, const NodeSelection& removed);

/// Maximum acquirable fraction per node: the incoming-weight sum clamped to
/// 1, or exactly 1 for root nodes (no owners).
Vector compute_o_max(const OwnershipNetwork& net);

/// All nodes with a directed path into the target set, targets included.
NodeSelection in_component(const OwnershipNetwork& net, const NodeSelection& targets);

/// Forward-reachable set from the sources, sources included.
NodeSelection reachable_from_sources(const OwnershipNetwork& net, const NodeSelection& sources);

/// Induced subnetwork on the kept nodes (indices preserve relative order).
OwnershipNetwork subnetwork(const OwnershipNetwork& net, const NodeSelection& keep);

/// Largest weakly connected component; ties broken by the component holding
/// the smallest node index.
OwnershipNetwork largest_connected_component(const OwnershipNetwork& net);

/// Reads the delimiter-separated node and edge files (comma or tab, sniffed
/// from the header). Nodes require columns id,value; extra columns become
/// string attributes. Edges require source,target,weight.
OwnershipNetwork load_network(const std::string& nodes_path, const std::string& edges_path,
                              const NetworkOptions& options = {});

void save_network(const OwnershipNetwork& net, const std::string& nodes_path,
                  const std::string& edges_path);

}  // namespace netcontrol
