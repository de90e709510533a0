#pragma once

#include <sgec/linalg.hpp>
#include <sgec/metrics.hpp>
#include <sgec/pipeline.hpp>

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace sgec {

enum class TextFormat { Csv, Whitespace };

inline TextFormat parse_format(const std::string& s) {
  if (s == "csv") return TextFormat::Csv;
  if (s == "whitespace") return TextFormat::Whitespace;
  throw InvalidInput("unknown format '" + s + "'");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_cells(std::string_view line, TextFormat format) {
  std::vector<std::string_view> out;
  if (format == TextFormat::Csv) {
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  } else {
    std::size_t pos = 0;
    while (pos < line.size()) {
      pos = line.find_first_not_of(" \t\r", pos);
      if (pos == std::string_view::npos) break;
      const auto end = line.find_first_of(" \t\r", pos);
      out.push_back(line.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
      pos = end;
    }
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Reads a rectangular numeric table, one sample per line. A first line containing any
/// non-numeric cell is treated as a header. Blank lines are ignored.
inline Matrix parse_matrix(std::istream& in, TextFormat format) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_cells(line, format);
    std::vector<double> row;
    row.reserve(cells.size());
    bool numeric = true;
    for (auto cell : cells) {
      const auto v = detail::parse_double(cell);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw ParseError("non-numeric cell", lineno);
    }
    first = false;
    for (double v : row)
      if (!std::isfinite(v)) throw ParseError("non-finite value", lineno);
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("expected " + std::to_string(rows.front().size()) + " columns, found " +
                           std::to_string(row.size()),
                       lineno);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows", std::max<std::size_t>(lineno, 1));

  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index r = 0; r < out.rows(); ++r)
    for (Index c = 0; c < out.cols(); ++c) out(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return out;
}

inline DataMatrix load_matrix(const std::string& path, TextFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return DataMatrix(parse_matrix(in, format));
}

/// Single-column integer labels; an optional non-numeric header line is skipped.
inline std::vector<long long> parse_labels(std::istream& in) {
  std::vector<long long> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cell = detail::trim(line);
    if (cell.empty()) continue;
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
      if (out.empty() && lineno == 1) continue;
      throw ParseError("expected an integer label", lineno);
    }
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("no labels", std::max<std::size_t>(lineno, 1));
  return out;
}

inline std::vector<long long> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_labels(in);
}

/// One 0-based cluster id per line, aligned with the input rows.
inline void write_assignment(std::ostream& out, const Assignment& G) {
  for (int l : G.labels()) out << l << '\n';
}

inline void save_assignment(const Assignment& G, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_assignment(out, G);
  if (!out) throw IoError("write failed for '" + path + "'");
}

/// Everything persisted about one clustering run.
struct RunRecord {
  FitConfig config;
  std::string input;
  std::vector<int> assignment;
  int clusters = 0;
  std::vector<double> objective_trace;
  int outer_iters = 0;
  bool converged = false;
  double wall_time = 0.0;
  std::optional<Metrics> metrics;
  std::string started_at;
};

inline RunRecord make_record(const FitReport& report, std::string input, std::optional<Metrics> metrics,
                             std::string started_at) {
  return {report.config,        std::move(input),     report.assignment.labels(), report.assignment.clusters(),
          report.objective_trace, report.outer_iters, report.converged,           report.wall_time,
          metrics,              std::move(started_at)};
}

inline nlohmann::json config_to_json(const FitConfig& c) {
  nlohmann::json j;
  j["method"] = to_string(c.method);
  j["clusters"] = c.clusters;
  j["neighbors"] = c.neighbors;
  j["dim"] = c.target_dim;
  j["eta"] = c.eta;
  j["beta"] = c.beta ? nlohmann::json(*c.beta) : nlohmann::json("auto");
  j["max_outer"] = c.max_outer;
  j["tol"] = c.tol;
  j["seed"] = c.seed;
  j["standardize"] = c.standardize;
  j["recompute_knn_embedded"] = c.recompute_knn_embedded;
  j["init"] = c.init == InitMethod::KMeans ? "kmeans" : "balanced-random";
  j["max_sweeps"] = c.max_sweeps;
  j["mfa_distances"] = c.mfa_distances == MfaAssignmentDistances::NeighborMasked ? "masked" : "full";
  return j;
}

inline FitConfig config_from_json(const nlohmann::json& j) {
  FitConfig c;
  c.method = parse_method(j.at("method").get<std::string>());
  c.clusters = j.at("clusters").get<int>();
  c.neighbors = j.at("neighbors").get<int>();
  c.target_dim = j.at("dim").get<Index>();
  c.eta = j.at("eta").get<double>();
  if (j.at("beta").is_number()) c.beta = j.at("beta").get<double>();
  c.max_outer = j.at("max_outer").get<int>();
  c.tol = j.at("tol").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.standardize = j.at("standardize").get<bool>();
  c.recompute_knn_embedded = j.at("recompute_knn_embedded").get<bool>();
  c.init = j.at("init").get<std::string>() == "kmeans" ? InitMethod::KMeans : InitMethod::BalancedRandom;
  c.max_sweeps = j.at("max_sweeps").get<int>();
  c.mfa_distances =
      j.at("mfa_distances").get<std::string>() == "masked" ? MfaAssignmentDistances::NeighborMasked
                                                            : MfaAssignmentDistances::Full;
  return c;
}

inline nlohmann::json record_to_json(const RunRecord& r) {
  nlohmann::json j;
  j["config"] = config_to_json(r.config);
  j["input"] = r.input;
  j["started_at"] = r.started_at;
  j["clusters"] = r.clusters;
  j["assignment"] = r.assignment;
  j["objective_trace"] = r.objective_trace;
  j["outer_iters"] = r.outer_iters;
  j["converged"] = r.converged;
  j["wall_time"] = r.wall_time;
  if (r.metrics)
    j["metrics"] = {{"acc", r.metrics->acc}, {"nmi", r.metrics->nmi}, {"purity", r.metrics->purity}};
  else
    j["metrics"] = nullptr;
  return j;
}

inline RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.config = config_from_json(j.at("config"));
  r.input = j.at("input").get<std::string>();
  r.started_at = j.at("started_at").get<std::string>();
  r.clusters = j.at("clusters").get<int>();
  r.assignment = j.at("assignment").get<std::vector<int>>();
  r.objective_trace = j.at("objective_trace").get<std::vector<double>>();
  r.outer_iters = j.at("outer_iters").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.wall_time = j.at("wall_time").get<double>();
  if (const auto& m = j.at("metrics"); !m.is_null())
    r.metrics = Metrics{m.at("acc").get<double>(), m.at("nmi").get<double>(), m.at("purity").get<double>()};
  return r;
}

inline void save_report(const RunRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << record_to_json(record).dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline RunRecord load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return record_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what(), 1);
  }
}

}  // namespace sgec
