#pragma once

// Tables, number formatting and atomic file output for the command line tool.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cavity_ising::app {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

/// Twelve significant digits; non-finite values spelled as nan/inf/-inf.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// The double that format_double prints, so JSON and CSV carry the same value.
inline double rounded(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format_double(x));
}

inline json json_number(double x) {
  if (!std::isfinite(x)) return format_double(x);
  return rounded(x);
}

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

inline std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t j = 0; j < t.columns.size(); ++j) out += (j ? "," : "") + t.columns[j];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + cell_text(row[j]);
    out += '\n';
  }
  return out;
}

inline json to_json(const Table& t) {
  json arr = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t j = 0; j < row.size(); ++j) {
      const auto& c = row[j];
      if (const auto* d = std::get_if<double>(&c)) obj[t.columns[j]] = json_number(*d);
      else if (const auto* i = std::get_if<long long>(&c)) obj[t.columns[j]] = *i;
      else obj[t.columns[j]] = std::get<std::string>(c);
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Writes through a sibling temporary file and rename, so readers never see
/// a partial file.
inline void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

enum class Format { Csv, Json };

/// Writes the table as <stem>.csv or <stem>.json and returns the path.
inline fs::path write_table(const fs::path& dir, const std::string& stem, const Table& t, Format f) {
  const fs::path p = dir / (stem + (f == Format::Csv ? ".csv" : ".json"));
  write_atomic(p, f == Format::Csv ? to_csv(t) : dump(to_json(t)));
  return p;
}

/// Parses "lo:hi:n" into n evenly spaced values, or a single number.
inline std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() == 1) return {std::stod(parts[0])};
  if (parts.size() != 3) throw std::invalid_argument("grid must be 'value' or 'lo:hi:n': " + spec);
  const double lo = std::stod(parts[0]);
  const double hi = std::stod(parts[1]);
  const int n = std::stoi(parts[2]);
  if (n < 2 || !(hi > lo)) throw std::invalid_argument("grid needs n >= 2 and hi > lo: " + spec);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

/// Parses a comma-separated list of numbers.
inline std::vector<double> parse_list(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + spec);
  return out;
}

inline double parse_beta(const std::string& s) {
  if (s == "inf" || s == "infinity") return HUGE_VAL;
  const double b = std::stod(s);
  if (!(b > 0.0)) throw std::invalid_argument("beta must be > 0 or inf");
  return b;
}

}  // namespace cavity_ising::app
