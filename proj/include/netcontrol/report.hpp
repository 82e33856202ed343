#pragma once

#include "netcontrol/optimizer.hpp"
#include "netcontrol/problem.hpp"

#include <string>
#include <vector>

namespace netcontrol {

/// Per-node result row for the node report.
struct ReportRow {
  std::string id;
  std::vector<std::string> attributes;  ///< values in attribute-key order
  double value = 0.0;
  double o_max = 0.0;
  double direct = 0.0;
  double indirect = 0.0;
  double total = 0.0;
  double spend = 0.0;
};

std::vector<ReportRow> build_node_report(const InterventionProblem& problem,
                                         const OptimizationResult& result);

/// Columns: id, <attribute keys sorted>, value, o_max, direct, indirect,
/// total, spend. Rows in node order.
void write_node_report(const std::string& path, const InterventionProblem& problem,
                       const OptimizationResult& result);

/// Columns: outer, step, control_loss, cost_loss, total, constraint, rho, alpha.
void write_trajectory(const std::string& path, const OptimizationResult& result);

/// Single structured key-value document for the run. Deterministic byte
/// output for a fixed (problem, result): no timestamps or timings.
void write_summary(const std::string& path, const InterventionProblem& problem,
                   const OptimizationResult& result, double c_cut);

/// Columns: lambda, ok, converged, control_loss, cost_loss, total_loss,
/// control_pct_available, control_pct_equity, error. One row per grid point.
void write_sweep(const std::string& path, const InterventionProblem& problem,
                 const std::vector<SweepPoint>& sweep);

struct GroupRow {
  std::string key;
  Index node_count = 0;
  double spend = 0.0;
  double direct_control = 0.0;
  double total_control = 0.0;
};

/// Aggregates a result by one attribute. Groups partition the nodes, so the
/// per-group sums add up to the global totals exactly.
std::vector<GroupRow> build_group_report(const InterventionProblem& problem,
                                         const OptimizationResult& result,
                                         const std::string& attribute);

/// Same aggregation computed from a node report file written by
/// write_node_report; `attribute` must be one of its columns.
std::vector<GroupRow> group_report_from_csv(const std::string& report_path,
                                            const std::string& attribute);

void write_groups(const std::string& path, const std::vector<GroupRow>& rows);

/// Shortest decimal form that round-trips a double; used for all report
/// numbers so repeated runs are byte-identical.
std::string format_number(double x);

}  // namespace netcontrol
