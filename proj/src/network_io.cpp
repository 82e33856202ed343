#include "netcontrol/network.hpp"

#include "csv.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace netcontrol {

namespace {

std::string format_full(double w) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

}  // namespace

OwnershipNetwork load_network(const std::string& nodes_path, const std::string& edges_path,
                              const NetworkOptions& options) {
  const csv::Table nodes = csv::read_table(nodes_path);
  const std::size_t id_col = csv::column_of(nodes, "id", nodes_path);
  const std::size_t value_col = csv::column_of(nodes, "value", nodes_path);

  const Index n = static_cast<Index>(nodes.rows.size());
  std::vector<std::string> ids;
  ids.reserve(nodes.rows.size());
  Vector values(n);
  std::map<std::string, std::vector<std::string>> attributes;
  for (std::size_t k = 0; k < nodes.header.size(); ++k) {
    if (k == id_col || k == value_col) continue;
    attributes.emplace(nodes.header[k], std::vector<std::string>(nodes.rows.size()));
  }

  for (std::size_t r = 0; r < nodes.rows.size(); ++r) {
    const auto& row = nodes.rows[r];
    if (row[id_col].empty()) {
      throw InvalidInput(nodes_path + ": empty id in data row " + std::to_string(r + 1));
    }
    if (row[value_col].empty()) {
      throw InvalidInput(nodes_path + ": missing value for node " + row[id_col]);
    }
    ids.push_back(row[id_col]);
    values(static_cast<Index>(r)) = csv::parse_double(row[value_col], nodes_path);
    for (std::size_t k = 0; k < nodes.header.size(); ++k) {
      if (k == id_col || k == value_col) continue;
      attributes[nodes.header[k]][r] = row[k];
    }
  }

  std::unordered_map<std::string, Index> index;
  index.reserve(ids.size());
  for (Index i = 0; i < n; ++i) {
    if (!index.emplace(ids[static_cast<std::size_t>(i)], i).second) {
      throw InvalidInput(nodes_path + ": duplicate node id: " + ids[static_cast<std::size_t>(i)]);
    }
  }

  const csv::Table edges = csv::read_table(edges_path);
  const std::size_t src_col = csv::column_of(edges, "source", edges_path);
  const std::size_t dst_col = csv::column_of(edges, "target", edges_path);
  const std::size_t w_col = csv::column_of(edges, "weight", edges_path);

  Matrix adj = Matrix::Zero(n, n);
  std::set<std::pair<Index, Index>> seen;
  for (const auto& row : edges.rows) {
    const auto src = index.find(row[src_col]);
    if (src == index.end()) {
      throw InvalidInput(edges_path + ": edge source '" + row[src_col] + "' not in nodes file");
    }
    const auto dst = index.find(row[dst_col]);
    if (dst == index.end()) {
      throw InvalidInput(edges_path + ": edge target '" + row[dst_col] + "' not in nodes file");
    }
    const double w = csv::parse_double(row[w_col], edges_path);
    if (!(w >= 0.0 && w <= 1.0)) {
      throw InvalidInput(edges_path + ": weight " + row[w_col] + " outside [0,1] on edge " +
                         row[src_col] + " -> " + row[dst_col]);
    }
    if (src->second == dst->second) {
      throw InvalidInput(edges_path + ": self-loop at node " + row[src_col]);
    }
    if (!seen.emplace(src->second, dst->second).second) {
      throw InvalidInput(edges_path + ": duplicate edge " + row[src_col] + " -> " + row[dst_col]);
    }
    adj(src->second, dst->second) = w;
  }

  return OwnershipNetwork(std::move(ids), std::move(values), std::move(adj),
                          std::move(attributes), options);
}

void save_network(const OwnershipNetwork& net, const std::string& nodes_path,
                  const std::string& edges_path) {
  std::ofstream nodes(nodes_path);
  if (!nodes) throw InvalidInput("cannot write file: " + nodes_path);
  nodes << "id,value";
  for (const auto& [key, column] : net.attributes()) nodes << "," << key;
  nodes << "\n";
  for (Index i = 0; i < net.size(); ++i) {
    nodes << net.id(i) << "," << format_full(net.values()(i));
    for (const auto& [key, column] : net.attributes()) {
      nodes << "," << column[static_cast<std::size_t>(i)];
    }
    nodes << "\n";
  }

  std::ofstream edges(edges_path);
  if (!edges) throw InvalidInput("cannot write file: " + edges_path);
  edges << "source,target,weight\n";
  for (Index i = 0; i < net.size(); ++i) {
    for (Index j = 0; j < net.size(); ++j) {
      const double w = net.adjacency()(i, j);
      if (w > 0.0) {
        edges << net.id(i) << "," << net.id(j) << "," << format_full(w) << "\n";
      }
    }
  }
}

}  // namespace netcontrol
