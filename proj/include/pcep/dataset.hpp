#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace pcep {

/// Record of the transforms applied to a Dataset, in the order applied.
struct Preprocessing {
  std::vector<std::string> log_transformed;  // covariate names
  bool response_logged = false;
  bool centered = false;
  std::vector<std::string> not_centered;  // columns excluded from centering
};

/// Response vector plus candidate covariates (intercept excluded).
///
/// Invariants checked on construction: n >= 3, sizes agree, names are unique
/// and no covariate column is constant.
class Dataset {
 public:
  Dataset(Eigen::VectorXd y, Eigen::MatrixXd X, std::vector<std::string> names,
          std::string response_name = "y", Preprocessing preprocessing = {});

  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::MatrixXd& X() const { return X_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& response_name() const { return response_name_; }
  const Preprocessing& preprocessing() const { return preprocessing_; }
  Eigen::Index n() const { return X_.rows(); }
  int p() const { return static_cast<int>(X_.cols()); }

  /// Index of a covariate by name; throws SchemaError if absent.
  int column(const std::string& name) const;

  /// Same covariates with a different response.
  Dataset with_response(Eigen::VectorXd y) const;
  /// Rows selected by index, preprocessing record kept.
  Dataset rows(const std::vector<Eigen::Index>& index) const;

 private:
  Eigen::VectorXd y_;
  Eigen::MatrixXd X_;
  std::vector<std::string> names_;
  std::string response_name_;
  Preprocessing preprocessing_;
};

/// Column roles for delimited input.
struct ColumnSchema {
  std::string response = "y";
  std::set<std::string> ignore;  // e.g. a row-label column
};

/// Parses comma-delimited text with a header row.
Dataset parse_dataset(std::istream& in, const ColumnSchema& schema,
                      const std::string& source = "<stream>");
Dataset load_dataset(const std::filesystem::path& path, const ColumnSchema& schema);

/// Log-transforms every variable (response included) except those named in
/// `log_except`, then mean-centres all columns and the response when `center`
/// is set, skipping any column named in `center_except`.
Dataset preprocess(const Dataset& ds, const std::set<std::string>& log_except, bool center,
                   const std::set<std::string>& center_except = {});

/// Centre only; equivalent to preprocess with every column in log_except.
Dataset centered(const Dataset& ds);

/// The 47-state crime data, raw values (response `y`, covariates X1..X15).
Dataset crime_dataset();
/// The crime data with the standard recipe: log of all variables except the
/// southern-state indicator X2, then centering.
Dataset crime_dataset_preprocessed();
/// The embedded CSV text and its SHA-256 digest (hex).
const std::string& crime_csv();
const char* crime_csv_sha256();

}  // namespace pcep
