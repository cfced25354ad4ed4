#include "pcep/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "pcep/errors.hpp"

namespace pcep {

Dataset::Dataset(Eigen::VectorXd y, Eigen::MatrixXd X, std::vector<std::string> names,
                 std::string response_name, Preprocessing preprocessing)
    : y_(std::move(y)),
      X_(std::move(X)),
      names_(std::move(names)),
      response_name_(std::move(response_name)),
      preprocessing_(std::move(preprocessing)) {
  if (X_.rows() != y_.size()) throw DimensionError("X and y have different row counts");
  if (y_.size() < 3) throw DimensionError("a dataset needs at least 3 observations");
  if (static_cast<Eigen::Index>(names_.size()) != X_.cols())
    throw SchemaError("one name per covariate column is required");
  std::unordered_set<std::string> seen;
  for (const std::string& name : names_)
    if (!seen.insert(name).second) throw SchemaError("duplicate column name '" + name + "'");
  if (seen.count(response_name_)) throw SchemaError("response name clashes with a covariate");
  if (!y_.allFinite() || !X_.allFinite()) throw DomainError("non-finite value in dataset");
  for (Eigen::Index j = 0; j < X_.cols(); ++j)
    if (X_.col(j).maxCoeff() == X_.col(j).minCoeff())
      throw SchemaError("covariate '" + names_[j] + "' is constant");
}

int Dataset::column(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw SchemaError("no covariate named '" + name + "'");
  return static_cast<int>(it - names_.begin());
}

Dataset Dataset::with_response(Eigen::VectorXd y) const {
  return Dataset(std::move(y), X_, names_, response_name_, preprocessing_);
}

Dataset Dataset::rows(const std::vector<Eigen::Index>& index) const {
  Eigen::VectorXd y(index.size());
  Eigen::MatrixXd X(index.size(), X_.cols());
  for (std::size_t i = 0; i < index.size(); ++i) {
    y(i) = y_(index[i]);
    X.row(i) = X_.row(index[i]);
  }
  return Dataset(std::move(y), std::move(X), names_, response_name_, preprocessing_);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

}  // namespace

Dataset parse_dataset(std::istream& in, const ColumnSchema& schema, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source + ": empty input", 0, "");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  std::unordered_set<std::string> seen;
  for (const auto& h : header)
    if (!seen.insert(h).second) throw SchemaError(source + ": duplicate column name '" + h + "'");
  auto response_it = std::find(header.begin(), header.end(), schema.response);
  if (response_it == header.end())
    throw SchemaError(source + ": response column '" + schema.response + "' not found");

  std::vector<std::size_t> covariate_cols;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == schema.response || schema.ignore.count(header[c])) continue;
    covariate_cols.push_back(c);
    names.push_back(header[c]);
  }
  const std::size_t response_col = response_it - header.begin();

  std::vector<double> yv;
  std::vector<std::vector<double>> rows;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError(source + ": row " + std::to_string(row) + " has " +
                           std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(header.size()),
                       row, "");
    auto number = [&](std::size_t c) {
      const std::string text = trim(cells[c]);
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError(source + ": row " + std::to_string(row) + ", column '" + header[c] +
                             "': not a number: '" + text + "'",
                         row, header[c]);
      return value;
    };
    yv.push_back(number(response_col));
    std::vector<double> xs;
    xs.reserve(covariate_cols.size());
    for (std::size_t c : covariate_cols) xs.push_back(number(c));
    rows.push_back(std::move(xs));
  }

  Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(yv.data(), yv.size());
  Eigen::MatrixXd X(rows.size(), covariate_cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < covariate_cols.size(); ++j) X(i, j) = rows[i][j];
  return Dataset(std::move(y), std::move(X), std::move(names), schema.response);
}

Dataset load_dataset(const std::filesystem::path& path, const ColumnSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0, "");
  return parse_dataset(in, schema, path.string());
}

Dataset preprocess(const Dataset& ds, const std::set<std::string>& log_except, bool center,
                   const std::set<std::string>& center_except) {
  Eigen::VectorXd y = ds.y();
  Eigen::MatrixXd X = ds.X();
  Preprocessing record = ds.preprocessing();

  auto log_column = [](auto&& col, const std::string& name) {
    if ((col.array() <= 0.0).any())
      throw DomainError("cannot log-transform '" + name + "': non-positive value");
    col = col.array().log().matrix();
  };
  for (int j = 0; j < ds.p(); ++j) {
    if (log_except.count(ds.names()[j])) continue;
    log_column(X.col(j), ds.names()[j]);
    record.log_transformed.push_back(ds.names()[j]);
  }
  if (!log_except.count(ds.response_name())) {
    log_column(y, ds.response_name());
    record.response_logged = true;
  }

  if (center) {
    for (int j = 0; j < ds.p(); ++j) {
      if (center_except.count(ds.names()[j])) {
        record.not_centered.push_back(ds.names()[j]);
        continue;
      }
      X.col(j).array() -= X.col(j).mean();
    }
    if (center_except.count(ds.response_name()))
      record.not_centered.push_back(ds.response_name());
    else
      y.array() -= y.mean();
    record.centered = true;
  }
  return Dataset(std::move(y), std::move(X), ds.names(), ds.response_name(), std::move(record));
}

Dataset centered(const Dataset& ds) {
  std::set<std::string> all(ds.names().begin(), ds.names().end());
  all.insert(ds.response_name());
  return preprocess(ds, all, true);
}

Dataset crime_dataset() {
  std::istringstream in(crime_csv());
  return parse_dataset(in, ColumnSchema{}, "builtin:crime");
}

Dataset crime_dataset_preprocessed() { return preprocess(crime_dataset(), {"X2"}, true); }

}  // namespace pcep
