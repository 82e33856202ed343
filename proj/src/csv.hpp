#pragma once

#include "netcontrol/types.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace netcontrol::csv {

inline std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, delim)) fields.push_back(field);
  if (!line.empty() && line.back() == delim) fields.emplace_back();
  return fields;
}

inline std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && (s[start] == ' ' || s[start] == '\t')) ++start;
  return s.substr(start);
}

inline double parse_double(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw InvalidInput(where + ": cannot parse number '" + text + "'");
  }
  return value;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Delimiter-separated text with a header row; the delimiter is sniffed from
/// the first line (tab when present, comma otherwise).
inline Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open file: " + path);

  Table table;
  std::string line;
  std::size_t line_no = 0;
  char delim = ',';
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.find('\t') != std::string::npos) delim = '\t';
    if (strip(line).empty()) continue;
    std::vector<std::string> fields = split(line, delim);
    for (std::string& f : fields) f = strip(f);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size()) {
        throw InvalidInput(path + ":" + std::to_string(line_no) + ": expected " +
                           std::to_string(table.header.size()) + " fields, got " +
                           std::to_string(fields.size()));
      }
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) throw InvalidInput(path + ": missing header row");
  return table;
}

inline std::size_t column_of(const Table& table, const std::string& name, const std::string& path) {
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    if (table.header[k] == name) return k;
  }
  throw InvalidInput(path + ": missing required column '" + name + "'");
}

}  // namespace netcontrol::csv
