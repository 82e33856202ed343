#include "netcontrol/report.hpp"

#include "csv.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <map>

namespace netcontrol {

std::string format_number(double x) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write file: " + path);
  return out;
}

const char* stop_reason_name(const OptimizationResult& result) {
  return result.reason == StopReason::ConvergenceWindow ? "window" : "step_cap";
}

}  // namespace

std::vector<ReportRow> build_node_report(const InterventionProblem& problem,
                                         const OptimizationResult& result) {
  const OwnershipNetwork& net = problem.network();
  std::vector<ReportRow> rows;
  rows.reserve(static_cast<std::size_t>(net.size()));
  for (Index j = 0; j < net.size(); ++j) {
    ReportRow row;
    row.id = net.id(j);
    for (const auto& [key, column] : net.attributes()) {
      row.attributes.push_back(column[static_cast<std::size_t>(j)]);
    }
    row.value = net.values()(j);
    row.o_max = problem.o_max(j);
    row.direct = result.control.direct(j);
    row.total = result.control.total(j);
    row.indirect = row.total - row.direct;
    row.spend = row.direct * row.value;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_node_report(const std::string& path, const InterventionProblem& problem,
                       const OptimizationResult& result) {
  std::ofstream out = open_out(path);
  out << "id";
  for (const auto& [key, column] : problem.network().attributes()) out << "," << key;
  out << ",value,o_max,direct,indirect,total,spend\n";
  for (const ReportRow& row : build_node_report(problem, result)) {
    out << row.id;
    for (const std::string& a : row.attributes) out << "," << a;
    out << "," << format_number(row.value) << "," << format_number(row.o_max) << ","
        << format_number(row.direct) << "," << format_number(row.indirect) << ","
        << format_number(row.total) << "," << format_number(row.spend) << "\n";
  }
}

void write_trajectory(const std::string& path, const OptimizationResult& result) {
  std::ofstream out = open_out(path);
  out << "outer,step,control_loss,cost_loss,total,constraint,rho,alpha\n";
  for (const TrajectoryPoint& point : result.trajectory) {
    out << point.outer << "," << point.step << "," << format_number(point.loss.control_loss)
        << "," << format_number(point.loss.cost_loss) << "," << format_number(point.loss.total)
        << "," << format_number(point.loss.constraint) << "," << format_number(point.loss.rho)
        << "," << format_number(point.loss.alpha) << "\n";
  }
}

void write_summary(const std::string& path, const InterventionProblem& problem,
                   const OptimizationResult& result, double c_cut) {
  nlohmann::ordered_json doc;
  doc["mode"] = problem.loss.mode == LossMode::Lambda ? "lambda" : "budget";
  if (problem.loss.mode == LossMode::Lambda) {
    doc["lambda"] = problem.loss.lambda;
  } else {
    doc["budget"] = problem.loss.budget;
    doc["constraint_sense"] =
        problem.loss.sense == ConstraintSense::Equality ? "eq" : "ineq";
  }
  switch (problem.loss.cost) {
    case CostVariant::Value:
      doc["cost_variant"] = "value";
      break;
    case CostVariant::L1:
      doc["cost_variant"] = "l1";
      break;
    case CostVariant::L2:
      doc["cost_variant"] = "l2";
      break;
  }
  doc["seed"] = result.seed;
  doc["learning_rate_used"] = result.learning_rate_used;
  doc["steps"] = result.steps;
  if (problem.loss.mode == LossMode::Budget) {
    doc["outer_iterations"] = result.outer_iterations;
    doc["feasible"] = result.feasible;
  }
  doc["converged"] = result.converged;
  doc["stop_reason"] = stop_reason_name(result);
  doc["control_loss"] = result.final_loss.control_loss;
  doc["cost_loss"] = result.final_loss.cost_loss;
  doc["total_loss"] = result.final_loss.total;
  doc["constraint_violation"] = result.final_loss.constraint;
  if (problem.loss.mode == LossMode::Budget) {
    doc["rho"] = result.final_loss.rho;
    doc["alpha"] = result.final_loss.alpha;
  }
  doc["control_pct_available"] =
      control_pct_available(result.control, problem.targets, problem.o_max);
  doc["control_pct_equity"] = control_pct_equity(result.control, problem.targets);
  doc["spend_total"] = cost_value(result.o, problem.network(), problem.sources);
  doc["c_cut"] = c_cut;
  doc["control_set_size"] = control_set_size(result.control.total, c_cut);
  doc["nodes"] = problem.network().size();
  doc["n_sources"] = problem.sources.size();
  doc["n_targets"] = problem.targets.size();

  std::ofstream out = open_out(path);
  out << doc.dump(2) << "\n";
}

void write_sweep(const std::string& path, const InterventionProblem& problem,
                 const std::vector<SweepPoint>& sweep) {
  std::ofstream out = open_out(path);
  out << "lambda,ok,converged,control_loss,cost_loss,total_loss,"
         "control_pct_available,control_pct_equity,error\n";
  for (const SweepPoint& point : sweep) {
    out << format_number(point.lambda) << "," << (point.ok ? 1 : 0);
    if (point.ok) {
      const OptimizationResult& r = point.result;
      out << "," << (r.converged ? 1 : 0) << "," << format_number(r.final_loss.control_loss)
          << "," << format_number(r.final_loss.cost_loss) << ","
          << format_number(r.final_loss.total) << ","
          << format_number(control_pct_available(r.control, problem.targets, problem.o_max))
          << "," << format_number(control_pct_equity(r.control, problem.targets)) << ",";
    } else {
      out << ",0,,,,,," << point.error;
    }
    out << "\n";
  }
}

std::vector<GroupRow> build_group_report(const InterventionProblem& problem,
                                         const OptimizationResult& result,
                                         const std::string& attribute) {
  const std::vector<std::string>& column = problem.network().attribute(attribute);
  std::map<std::string, GroupRow> groups;
  for (Index j = 0; j < problem.network().size(); ++j) {
    GroupRow& g = groups[column[static_cast<std::size_t>(j)]];
    g.key = column[static_cast<std::size_t>(j)];
    g.node_count += 1;
    g.spend += result.control.direct(j) * problem.network().values()(j);
    g.direct_control += result.control.direct(j);
    g.total_control += result.control.total(j);
  }
  std::vector<GroupRow> rows;
  rows.reserve(groups.size());
  for (auto& [key, row] : groups) rows.push_back(std::move(row));
  return rows;
}

std::vector<GroupRow> group_report_from_csv(const std::string& report_path,
                                            const std::string& attribute) {
  const csv::Table table = csv::read_table(report_path);
  const std::size_t group_col = csv::column_of(table, attribute, report_path);
  const std::size_t direct_col = csv::column_of(table, "direct", report_path);
  const std::size_t total_col = csv::column_of(table, "total", report_path);
  const std::size_t spend_col = csv::column_of(table, "spend", report_path);

  std::map<std::string, GroupRow> groups;
  for (const auto& row : table.rows) {
    GroupRow& g = groups[row[group_col]];
    g.key = row[group_col];
    g.node_count += 1;
    g.spend += csv::parse_double(row[spend_col], report_path);
    g.direct_control += csv::parse_double(row[direct_col], report_path);
    g.total_control += csv::parse_double(row[total_col], report_path);
  }
  std::vector<GroupRow> rows;
  rows.reserve(groups.size());
  for (auto& [key, row] : groups) rows.push_back(std::move(row));
  return rows;
}

void write_groups(const std::string& path, const std::vector<GroupRow>& rows) {
  std::ofstream out = open_out(path);
  out << "group,node_count,spend,direct_control,total_control\n";
  for (const GroupRow& row : rows) {
    out << row.key << "," << row.node_count << "," << format_number(row.spend) << ","
        << format_number(row.direct_control) << "," << format_number(row.total_control) << "\n";
  }
}

}  // namespace netcontrol
