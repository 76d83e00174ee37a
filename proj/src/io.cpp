#include "bnnlp/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "bnnlp/errors.hpp"

namespace bnnlp {

using nlohmann::json;

Transform parse_transform(const std::string& name) {
  if (name == "level") return Transform::Level;
  if (name == "log_diff_pct") return Transform::LogDiffPct;
  if (name == "diff") return Transform::Diff;
  throw ConfigError("unknown transform '" + name + "' (expected level, log_diff_pct or diff)");
}

std::string transform_name(Transform t) {
  switch (t) {
    case Transform::Level: return "level";
    case Transform::LogDiffPct: return "log_diff_pct";
    case Transform::Diff: return "diff";
  }
  return "level";
}

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(trim(field));
  return out;
}

bool is_missing_token(const std::string& s) {
  return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "." || s == "null";
}

std::string locate(std::size_t line, const std::string& date, const std::string& column) {
  return "line " + std::to_string(line) + " (" + date + "), column '" + column + "'";
}

}  // namespace

YearMonth parse_year_month(const std::string& text) {
  const std::string s = trim(text);
  YearMonth ym;
  int day = 1;
  bool ok = false;
  if (s.size() == 7 && s[4] == '-') {
    ok = parse_int(std::string_view(s).substr(0, 4), ym.year) && parse_int(std::string_view(s).substr(5, 2), ym.month);
  } else if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    ok = parse_int(std::string_view(s).substr(0, 4), ym.year) &&
         parse_int(std::string_view(s).substr(5, 2), ym.month) && parse_int(std::string_view(s).substr(8, 2), day);
  }
  if (!ok || ym.month < 1 || ym.month > 12 || day < 1 || day > 31)
    throw InvalidInput("unparseable date '" + text + "' (expected YYYY-MM or YYYY-MM-DD)");
  return ym;
}

void DatasetConfig::validate() const {
  if (csv_path.empty()) throw ConfigError("dataset.csv_path is empty");
  if (date_column.empty()) throw ConfigError("dataset.date_column is empty");
  if (variable_order.empty()) throw ConfigError("dataset.variable_order is empty");
  std::set<std::string> seen;
  for (const auto& v : variable_order) {
    if (!seen.insert(v).second) throw ConfigError("dataset.variable_order lists '" + v + "' twice");
    if (!transforms.count(v)) throw ConfigError("dataset.transforms has no entry for '" + v + "'");
  }
  YearMonth a, b;
  try {
    a = parse_year_month(sample_start);
    b = parse_year_month(sample_end);
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("dataset sample bounds: ") + e.what());
  }
  if (b < a) throw ConfigError("dataset.sample_end precedes sample_start");
}

Eigen::Index Panel::column(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InvalidInput("panel has no variable '" + name + "'");
  return it - names.begin();
}

Panel load_and_transform(const DatasetConfig& cfg) {
  cfg.validate();
  std::ifstream in(cfg.csv_path);
  if (!in) throw DataError("cannot open data file '" + cfg.csv_path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("data file '" + cfg.csv_path + "' is empty");
  const std::vector<std::string> header = split_csv_line(line);
  auto find_col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("data file has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t date_col = find_col(cfg.date_column);
  const std::size_t N = cfg.variable_order.size();
  std::vector<std::size_t> cols(N);
  for (std::size_t i = 0; i < N; ++i) cols[i] = find_col(cfg.variable_order[i]);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<YearMonth> dates;
  std::vector<std::string> date_text;
  std::vector<std::size_t> line_no;
  std::vector<std::vector<double>> raw;
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size())
      throw DataError("line " + std::to_string(ln) + ": expected " + std::to_string(header.size()) + " fields, found " +
                      std::to_string(f.size()));
    YearMonth ym;
    try {
      ym = parse_year_month(f[date_col]);
    } catch (const InvalidInput& e) {
      throw DataError("line " + std::to_string(ln) + ", column '" + cfg.date_column + "': " + e.what());
    }
    if (!dates.empty() && !(dates.back() < ym))
      throw DataError("line " + std::to_string(ln) + ": dates must be strictly increasing");
    std::vector<double> row(N);
    for (std::size_t i = 0; i < N; ++i) {
      const std::string& cell = f[cols[i]];
      if (is_missing_token(cell)) {
        row[i] = nan;
        continue;
      }
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw DataError(locate(ln, f[date_col], cfg.variable_order[i]) + ": cannot parse '" + cell + "'");
      row[i] = v;
    }
    dates.push_back(ym);
    date_text.push_back(ym.str());
    line_no.push_back(ln);
    raw.push_back(std::move(row));
  }
  if (raw.empty()) throw DataError("data file '" + cfg.csv_path + "' has no data rows");

  const std::size_t T = raw.size();
  std::size_t lost = 0;
  for (const auto& v : cfg.variable_order)
    if (cfg.transforms.at(v) != Transform::Level) lost = 1;
  if (T <= lost) throw DataError("data file has too few rows for the requested transforms");

  std::vector<std::vector<double>> out(T, std::vector<double>(N, nan));
  for (std::size_t i = 0; i < N; ++i) {
    const Transform tr = cfg.transforms.at(cfg.variable_order[i]);
    for (std::size_t t = 0; t < T; ++t) {
      const double x = raw[t][i];
      if (tr == Transform::Level) {
        out[t][i] = x;
        continue;
      }
      if (tr == Transform::LogDiffPct && x <= 0.0)
        throw DataError(locate(line_no[t], date_text[t], cfg.variable_order[i]) +
                        ": log_diff_pct needs positive values, found " + format_double(x));
      if (t == 0) continue;
      const double prev = raw[t - 1][i];
      out[t][i] = tr == Transform::Diff ? x - prev : 100.0 * (std::log(x) - std::log(prev));
    }
  }

  const YearMonth lo = parse_year_month(cfg.sample_start);
  const YearMonth hi = parse_year_month(cfg.sample_end);
  if (lo < dates[lost] || dates.back() < hi)
    throw ConfigError("sample " + lo.str() + " to " + hi.str() + " is outside the usable data range " +
                      dates[lost].str() + " to " + dates.back().str());
  std::vector<std::size_t> keep;
  for (std::size_t t = lost; t < T; ++t)
    if (!(dates[t] < lo) && !(hi < dates[t])) keep.push_back(t);
  if (keep.empty()) throw DataError("no observations inside the sample bounds");

  Panel p;
  p.names = cfg.variable_order;
  p.values.resize(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(N));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const std::size_t t = keep[r];
    for (std::size_t i = 0; i < N; ++i) {
      if (!std::isfinite(out[t][i]))
        throw DataError(locate(line_no[t], date_text[t], cfg.variable_order[i]) + ": missing value after transform");
      p.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = out[t][i];
    }
    p.dates.push_back(date_text[t]);
  }
  return p;
}

void write_panel_csv(const Panel& panel, const std::filesystem::path& path, const std::string& date_column) {
  if (static_cast<Eigen::Index>(panel.dates.size()) != panel.values.rows() ||
      static_cast<Eigen::Index>(panel.names.size()) != panel.values.cols())
    throw InvalidInput("write_panel_csv: panel labels do not match its values");
  std::string s = date_column;
  for (const auto& n : panel.names) s += "," + n;
  s += "\n";
  for (Eigen::Index t = 0; t < panel.values.rows(); ++t) {
    s += panel.dates[static_cast<std::size_t>(t)];
    for (Eigen::Index i = 0; i < panel.values.cols(); ++i) s += "," + format_double(panel.values(t, i));
    s += "\n";
  }
  write_file(path, s);
}

void RunConfig::validate() const {
  dataset.validate();
  if (var.lags < 1) throw ConfigError("var.lags must be >= 1");
  if (network.layers < 1) throw ConfigError("network.layers must be >= 1");
  if (network.width < 0) throw ConfigError("network.width must be >= 0");
  chain.validate();
  if (horizon < 0) throw ConfigError("horizon must be >= 0");
  if (taus.empty()) throw ConfigError("taus is empty");
  for (double t : taus)
    if (!std::isfinite(t)) throw ConfigError("taus must be finite");
  if (std::set<double>(taus.begin(), taus.end()).size() != taus.size()) throw ConfigError("taus has duplicates");
  if (paths < 1) throw ConfigError("paths must be >= 1");
  if (lp_lags < 0) throw ConfigError("lp_lags must be >= 0");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (targets.empty()) throw ConfigError("targets is empty");
  for (const auto& t : targets)
    if (std::find(dataset.variable_order.begin(), dataset.variable_order.end(), t) == dataset.variable_order.end())
      throw ConfigError("target '" + t + "' is not in dataset.variable_order");
  if (std::set<std::string>(targets.begin(), targets.end()).size() != targets.size())
    throw ConfigError("targets has duplicates");
}

json to_json(const DatasetConfig& cfg) {
  json tr = json::object();
  for (const auto& [k, v] : cfg.transforms) tr[k] = transform_name(v);
  return {{"csv_path", cfg.csv_path},         {"date_column", cfg.date_column}, {"transforms", tr},
          {"variable_order", cfg.variable_order}, {"sample_start", cfg.sample_start}, {"sample_end", cfg.sample_end}};
}

json to_json(const ChainConfig& cfg) {
  return {{"n_iter", cfg.n_iter},
          {"n_burn", cfg.n_burn},
          {"hmc_step_size", cfg.hmc_step_size},
          {"hmc_n_steps", cfg.hmc_n_steps},
          {"seed", cfg.seed},
          {"sv_enabled", cfg.sv_enabled},
          {"network_enabled", cfg.network_enabled},
          {"hmc_adapt", cfg.hmc_adapt},
          {"hmc_target_accept", cfg.hmc_target_accept}};
}

json to_json(const RunConfig& cfg) {
  return {{"dataset", to_json(cfg.dataset)},
          {"var", {{"lags", cfg.var.lags}, {"include_intercept", cfg.var.include_intercept}}},
          {"network", {{"layers", cfg.network.layers}, {"width", cfg.network.width}}},
          {"chain", to_json(cfg.chain)},
          {"horizon", cfg.horizon},
          {"taus", cfg.taus},
          {"paths", cfg.paths},
          {"lp_lags", cfg.lp_lags},
          {"targets", cfg.targets},
          {"output_dir", cfg.output_dir},
          {"threads", cfg.threads}};
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    const bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) { return item.key() == k; });
    if (!ok) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
void read_key(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

}  // namespace

DatasetConfig dataset_config_from_json(const json& j) {
  check_keys(j, {"csv_path", "date_column", "transforms", "variable_order", "sample_start", "sample_end"}, "dataset");
  DatasetConfig c;
  read_key(j, "csv_path", c.csv_path, "dataset");
  read_key(j, "date_column", c.date_column, "dataset");
  read_key(j, "variable_order", c.variable_order, "dataset");
  read_key(j, "sample_start", c.sample_start, "dataset");
  read_key(j, "sample_end", c.sample_end, "dataset");
  std::map<std::string, std::string> tr;
  read_key(j, "transforms", tr, "dataset");
  for (const auto& [k, v] : tr) c.transforms[k] = parse_transform(v);
  return c;
}

ChainConfig chain_config_from_json(const json& j) {
  check_keys(j,
             {"n_iter", "n_burn", "hmc_step_size", "hmc_n_steps", "seed", "sv_enabled", "network_enabled", "hmc_adapt",
              "hmc_target_accept"},
             "chain");
  ChainConfig c;
  read_key(j, "n_iter", c.n_iter, "chain");
  read_key(j, "n_burn", c.n_burn, "chain");
  read_key(j, "hmc_step_size", c.hmc_step_size, "chain");
  read_key(j, "hmc_n_steps", c.hmc_n_steps, "chain");
  read_key(j, "seed", c.seed, "chain");
  read_key(j, "sv_enabled", c.sv_enabled, "chain");
  read_key(j, "network_enabled", c.network_enabled, "chain");
  read_key(j, "hmc_adapt", c.hmc_adapt, "chain");
  read_key(j, "hmc_target_accept", c.hmc_target_accept, "chain");
  return c;
}

RunConfig run_config_from_json(const json& j) {
  check_keys(j,
             {"dataset", "var", "network", "chain", "horizon", "taus", "paths", "lp_lags", "targets", "output_dir",
              "threads"},
             "config");
  RunConfig c;
  if (j.contains("dataset")) c.dataset = dataset_config_from_json(j.at("dataset"));
  if (j.contains("var")) {
    const json& v = j.at("var");
    check_keys(v, {"lags", "include_intercept"}, "var");
    read_key(v, "lags", c.var.lags, "var");
    read_key(v, "include_intercept", c.var.include_intercept, "var");
  }
  if (j.contains("network")) {
    const json& n = j.at("network");
    check_keys(n, {"layers", "width"}, "network");
    read_key(n, "layers", c.network.layers, "network");
    read_key(n, "width", c.network.width, "network");
  }
  if (j.contains("chain")) c.chain = chain_config_from_json(j.at("chain"));
  read_key(j, "horizon", c.horizon, "config");
  read_key(j, "taus", c.taus, "config");
  read_key(j, "paths", c.paths, "config");
  read_key(j, "lp_lags", c.lp_lags, "config");
  read_key(j, "targets", c.targets, "config");
  read_key(j, "output_dir", c.output_dir, "config");
  read_key(j, "threads", c.threads, "config");
  return c;
}

json to_json(const DgpSpec& spec) {
  return {{"kind", dgp_kind_name(spec.kind)}, {"T", spec.T},
          {"noise_sd", spec.noise_sd},         {"seed", spec.seed},
          {"impact", spec.impact},             {"decay", spec.decay},
          {"vol_ratio", spec.vol_ratio},       {"n_vars", spec.n_vars},
          {"persistence", spec.persistence}};
}

DgpSpec dgp_spec_from_json(const json& j) {
  check_keys(j, {"kind", "T", "noise_sd", "seed", "impact", "decay", "vol_ratio", "n_vars", "persistence"}, "simulation");
  DgpSpec s;
  std::string kind = dgp_kind_name(s.kind);
  read_key(j, "kind", kind, "simulation");
  try {
    s.kind = parse_dgp_kind(kind);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  read_key(j, "T", s.T, "simulation");
  read_key(j, "noise_sd", s.noise_sd, "simulation");
  read_key(j, "seed", s.seed, "simulation");
  read_key(j, "impact", s.impact, "simulation");
  read_key(j, "decay", s.decay, "simulation");
  read_key(j, "vol_ratio", s.vol_ratio, "simulation");
  read_key(j, "n_vars", s.n_vars, "simulation");
  read_key(j, "persistence", s.persistence, "simulation");
  return s;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  RunConfig c = run_config_from_json(j);
  if (!c.dataset.csv_path.empty()) {
    const std::filesystem::path csv(c.dataset.csv_path);
    if (csv.is_relative()) c.dataset.csv_path = (path.parent_path() / csv).lexically_normal().string();
  }
  return c;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string git_blob_hash(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  const bool ok = ctx && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) && EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  if (!ok) throw IoError("SHA-1 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string format_double(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw InvalidState("format_double: conversion failed");
  return std::string(buf, ptr);
}

}  // namespace bnnlp
