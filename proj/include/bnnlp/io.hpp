#ifndef BNNLP_IO_HPP
#define BNNLP_IO_HPP

#include <Eigen/Dense>
#include <compare>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "bnnlp/chain.hpp"
#include "bnnlp/lp.hpp"
#include "bnnlp/synth.hpp"
#include "bnnlp/var.hpp"

namespace bnnlp {

enum class Transform { Level, LogDiffPct, Diff };

Transform parse_transform(const std::string& name);
std::string transform_name(Transform t);

struct YearMonth {
  int year = 0;
  int month = 1;

  auto operator<=>(const YearMonth&) const = default;
  bool operator==(const YearMonth&) const = default;
  std::string str() const;
};

/// Accepts "YYYY-MM" and "YYYY-MM-DD"; the day is ignored. Throws
/// InvalidInput on anything else.
YearMonth parse_year_month(const std::string& text);

struct DatasetConfig {
  std::string csv_path;
  std::string date_column = "date";
  std::map<std::string, Transform> transforms;
  /// Panel and VAR ordering; the first variable defines the shock.
  std::vector<std::string> variable_order;
  std::string sample_start = "1960-01";
  std::string sample_end = "2020-12";

  void validate() const;
  bool operator==(const DatasetConfig&) const = default;
};

struct Panel {
  Eigen::MatrixXd values;  // periods x variables
  std::vector<std::string> names;
  std::vector<std::string> dates;

  Eigen::Index column(const std::string& name) const;
};

/// Reads the CSV, applies each column's transform, drops the rows lost to
/// differencing and keeps [sample_start, sample_end]. Columns follow
/// variable_order. Throws DataError naming the row and column for a
/// missing column, a bad date or number, or a missing value in the sample;
/// ConfigError for inconsistent settings.
Panel load_and_transform(const DatasetConfig& cfg);

/// Writes a panel in the input schema (date column first).
void write_panel_csv(const Panel& panel, const std::filesystem::path& path, const std::string& date_column = "date");

struct RunConfig {
  DatasetConfig dataset;
  /// VAR lag order and intercept; the ordering comes from the dataset.
  VarSpec var{6, {}, true};
  NetworkRule network;
  ChainConfig chain;
  int horizon = 24;
  std::vector<double> taus{1.0, -1.0, 3.0};
  int paths = 400;
  int lp_lags = 3;
  /// Response variables; each gets its own system of horizon regressions.
  std::vector<std::string> targets;
  std::string output_dir = "results";
  int threads = 1;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const DatasetConfig& cfg);
nlohmann::json to_json(const ChainConfig& cfg);
nlohmann::json to_json(const RunConfig& cfg);

/// Missing keys keep their defaults; unknown keys and wrong types throw
/// ConfigError.
DatasetConfig dataset_config_from_json(const nlohmann::json& j);
ChainConfig chain_config_from_json(const nlohmann::json& j);
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DgpSpec& spec);
DgpSpec dgp_spec_from_json(const nlohmann::json& j);

/// Reads a JSON config file. Relative csv paths resolve against the
/// directory of the config file.
RunConfig load_run_config(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

/// Hex SHA-1 of "blob <size>\0<content>", the object id git assigns to a file.
std::string git_blob_hash(const std::string& content);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

}  // namespace bnnlp

#endif  // BNNLP_IO_HPP
