#include "oosinfer/series.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "oosinfer/errors.hpp"

namespace oosinfer {

Transform transform_from_name(const std::string& name) {
  if (name == "increments") return Transform::Increments;
  if (name == "log_returns" || name == "log-returns") return Transform::LogReturns;
  if (name == "none") return Transform::None;
  throw ConfigError("unknown transform '" + name + "'");
}

std::string to_string(Transform t) {
  switch (t) {
    case Transform::Increments: return "increments";
    case Transform::LogReturns: return "log_returns";
    case Transform::None: return "none";
  }
  return "none";
}

Series::Series(std::vector<double> values, std::string name, std::string frequency,
               SeriesMeta meta)
    : values_(std::move(values)),
      name_(std::move(name)),
      frequency_(std::move(frequency)),
      meta_(std::move(meta)) {
  if (values_.size() < 2) {
    throw InsufficientDataError("series '" + name_ + "' needs at least 2 observations, got " +
                                std::to_string(values_.size()));
  }
  for (std::size_t t = 0; t < values_.size(); ++t) {
    if (!std::isfinite(values_[t])) {
      throw ParseError("series '" + name_ + "' has a non-finite value at index " +
                       std::to_string(t));
    }
  }
}

SplitPlan split_by_ratio(int T, double pi) {
  if (!(pi > 0.0) || !std::isfinite(pi)) {
    throw InvalidSplitError("pi must be a positive finite ratio, got " + std::to_string(pi));
  }
  // round half down so that e.g. T=101, pi=1 gives R=50.
  const int R = static_cast<int>(std::ceil(static_cast<double>(T) / (1.0 + pi) - 0.5));
  return split_by_insample(T, R);
}

SplitPlan split_by_insample(int T, int R) {
  if (R < 1 || R >= T) {
    throw InvalidSplitError("in-sample size R=" + std::to_string(R) +
                            " must satisfy 1 <= R < T=" + std::to_string(T));
  }
  const int P = T - R;
  if (P < 2) {
    throw InvalidSplitError("out-of-sample size P=" + std::to_string(P) +
                            " too small (need P >= 2)");
  }
  SplitPlan plan;
  plan.R = R;
  plan.P = P;
  plan.pi = static_cast<double>(P) / static_cast<double>(R);
  return plan;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    std::size_t b = cell.find_first_not_of(" \t\r");
    std::size_t e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Series ingest_csv(const std::string& path, const std::string& column, Transform transform) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError("file '" + path + "' is empty");
  const std::vector<std::string> header = split_line(line);
  if (header.empty()) throw ParseError("file '" + path + "' has an empty header");

  int col = -1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == column) col = static_cast<int>(j);
  }
  if (col < 0 && all_digits(column)) {
    const int idx = std::stoi(column);
    if (idx >= 0 && idx < static_cast<int>(header.size())) col = idx;
  }
  if (col < 0) {
    throw ParseError("column '" + column + "' not found in '" + path + "'");
  }

  SeriesMeta meta;
  meta.source_path = path;
  meta.column = header[col];
  meta.transform = transform;

  // A leading non-selected column whose first data cell is not numeric is
  // treated as the date column and kept in the metadata only.
  int date_col = -1;

  std::vector<double> raw;
  std::string first_date, last_date;
  int row = 0;  // 1-based data row for error messages
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_line(line);
    if (static_cast<int>(cells.size()) <= col) {
      throw ParseError("row " + std::to_string(row) + " of '" + path + "' has " +
                       std::to_string(cells.size()) + " cells, column index " +
                       std::to_string(col) + " missing");
    }
    if (row == 1 && col != 0) {
      double probe;
      if (!parse_double(cells[0], probe)) {
        date_col = 0;
        meta.date_column = header[0];
      }
    }
    double value;
    if (!parse_double(cells[col], value)) {
      throw ParseError("non-numeric cell '" + cells[col] + "' in column '" + header[col] +
                       "', data row " + std::to_string(row) + " of '" + path + "'");
    }
    raw.push_back(value);
    if (date_col >= 0) {
      if (first_date.empty()) first_date = cells[date_col];
      last_date = cells[date_col];
    }
  }
  if (raw.empty()) throw ParseError("file '" + path + "' has a header but no data rows");
  meta.first_date = first_date;
  meta.last_date = last_date;

  std::vector<double> values;
  switch (transform) {
    case Transform::None:
      values = raw;
      break;
    case Transform::Increments:
      values.reserve(raw.size() - 1);
      for (std::size_t t = 1; t < raw.size(); ++t) values.push_back(raw[t] - raw[t - 1]);
      break;
    case Transform::LogReturns:
      values.reserve(raw.size() - 1);
      for (std::size_t t = 1; t < raw.size(); ++t) {
        if (!(raw[t] > 0.0) || !(raw[t - 1] > 0.0)) {
          throw ParseError("log_returns needs positive prices; data row " + std::to_string(t + 1) +
                           " of '" + path + "'");
        }
        values.push_back(std::log(raw[t] / raw[t - 1]));
      }
      break;
  }
  if (values.size() < 2) {
    throw InsufficientDataError("'" + path + "': fewer than 2 observations after transform");
  }

  bool constant = true;
  for (double v : values) {
    if (v != values.front()) {
      constant = false;
      break;
    }
  }
  if (constant) {
    meta.warnings.push_back("degenerate-series: constant after transform " + to_string(transform));
  }

  std::string name = meta.column;
  return Series(std::move(values), std::move(name), "", std::move(meta));
}

}  // namespace oosinfer
