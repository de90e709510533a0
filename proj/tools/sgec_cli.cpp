// sgec: command-line front end for self-supervised graph-embedding clustering.
//
//   sgec cluster --input X.csv --clusters 3 [--method our-lpp|our-mfa|kmeans] ...
//   sgec eval    --pred pred.txt --truth truth.txt
//   sgec sweep   --input X.csv --clusters 3 --labels y.txt --param neighbors --values 5,10,20
//
// Exit codes: 0 success, 1 invalid input, 2 numeric failure, 3 IO failure.

#include <sgec/sgec.hpp>

#include "CLI11.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct ClusterOptions {
  std::string input;
  std::string format = "csv";
  std::string method = "our-lpp";
  int clusters = 2;
  int neighbors = 5;
  long dim = 0;
  double eta = 1.0;
  std::string beta = "auto";
  std::uint64_t seed = 0;
  int max_outer = 50;
  double tol = 1e-6;
  bool standardize = false;
  bool recompute_knn = false;
  std::string init = "balanced";
  std::string mfa_distances = "full";
  std::string labels;
};

void add_cluster_flags(CLI::App& cmd, ClusterOptions& o) {
  cmd.add_option("--input", o.input, "Sample matrix, one sample per row")->required();
  cmd.add_option("--format", o.format, "csv | whitespace")->check(CLI::IsMember({"csv", "whitespace"}));
  cmd.add_option("--method", o.method, "our-lpp | our-mfa | kmeans")
      ->check(CLI::IsMember({"our-lpp", "our-mfa", "kmeans"}));
  cmd.add_option("--clusters", o.clusters, "Number of clusters")->required();
  cmd.add_option("--neighbors", o.neighbors, "Neighbors per sample in the kNN graph");
  cmd.add_option("--dim", o.dim, "Embedding dimension (0: number of clusters)");
  cmd.add_option("--eta", o.eta, "Degree weight in the projection eigenproblem");
  cmd.add_option("--beta", o.beta, "Balance weight, or 'auto'");
  cmd.add_option("--seed", o.seed, "Random seed");
  cmd.add_option("--max-outer", o.max_outer, "Maximum outer iterations");
  cmd.add_option("--tol", o.tol, "Relative objective change that stops the outer loop");
  cmd.add_flag("--standardize", o.standardize, "Z-score every feature before fitting");
  cmd.add_flag("--recompute-knn", o.recompute_knn, "Rebuild the kNN graph in embedded space every iteration");
  cmd.add_option("--init", o.init, "balanced | kmeans")->check(CLI::IsMember({"balanced", "kmeans"}));
  cmd.add_option("--mfa-distances", o.mfa_distances, "full | masked distances for the MFA assignment step")
      ->check(CLI::IsMember({"full", "masked"}));
  cmd.add_option("--labels", o.labels, "Ground-truth labels, one integer per line");
}

sgec::FitConfig to_config(const ClusterOptions& o) {
  sgec::FitConfig cfg;
  cfg.method = sgec::parse_method(o.method);
  cfg.clusters = o.clusters;
  cfg.neighbors = o.neighbors;
  if (o.dim < 0) throw sgec::InvalidInput("--dim must be >= 0");
  cfg.target_dim = o.dim;
  cfg.eta = o.eta;
  if (o.beta != "auto") {
    try {
      std::size_t used = 0;
      cfg.beta = std::stod(o.beta, &used);
      if (used != o.beta.size()) throw std::invalid_argument(o.beta);
    } catch (const std::logic_error&) {
      throw sgec::InvalidInput("--beta must be a number or 'auto'");
    }
  }
  cfg.seed = o.seed;
  cfg.max_outer = o.max_outer;
  cfg.tol = o.tol;
  cfg.standardize = o.standardize;
  cfg.recompute_knn_embedded = o.recompute_knn;
  cfg.init = o.init == "kmeans" ? sgec::InitMethod::KMeans : sgec::InitMethod::BalancedRandom;
  cfg.mfa_distances =
      o.mfa_distances == "masked" ? sgec::MfaAssignmentDistances::NeighborMasked : sgec::MfaAssignmentDistances::Full;
  return cfg;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::optional<sgec::LabelVector> read_truth(const std::string& path, sgec::Index expected) {
  if (path.empty()) return std::nullopt;
  sgec::LabelVector truth(sgec::load_labels(path));
  if (truth.size() != expected)
    throw sgec::InvalidInput("label file has " + std::to_string(truth.size()) + " entries, expected " +
                             std::to_string(expected));
  return truth;
}

int run_cluster(const ClusterOptions& o, const std::string& output, const std::string& assignments) {
  const std::string started = utc_now();
  const sgec::DataMatrix X = sgec::load_matrix(o.input, sgec::parse_format(o.format));
  const auto truth = read_truth(o.labels, X.samples());
  const sgec::FitReport report = sgec::fit(X, to_config(o));

  std::optional<sgec::Metrics> metrics;
  if (truth) metrics = sgec::evaluate(report.assignment, *truth);

  if (!output.empty()) sgec::save_report(sgec::make_record(report, o.input, metrics, started), output);
  if (!assignments.empty()) sgec::save_assignment(report.assignment, assignments);
  if (output.empty() && assignments.empty()) sgec::write_assignment(std::cout, report.assignment);

  std::cerr << "outer iterations: " << report.outer_iters << (report.converged ? " (converged)" : " (max reached)")
            << '\n';
  if (metrics)
    std::cerr << std::setprecision(6) << "acc " << metrics->acc << "  nmi " << metrics->nmi << "  purity "
              << metrics->purity << '\n';
  return 0;
}

int run_eval(const std::string& pred_path, const std::string& truth_path) {
  const sgec::Assignment pred = sgec::assignment_from_labels(sgec::load_labels(pred_path));
  const auto truth = read_truth(truth_path, pred.samples());
  const sgec::Metrics m = sgec::evaluate(pred, *truth);
  std::cout << std::setprecision(10) << "acc " << m.acc << "\nnmi " << m.nmi << "\npurity " << m.purity << '\n';
  return 0;
}

std::vector<long> sweep_values(const std::vector<long>& listed, long from, long to, long step) {
  if (!listed.empty()) return listed;
  if (step <= 0 || from > to) throw sgec::InvalidInput("sweep range needs --from <= --to and --step > 0");
  std::vector<long> out;
  for (long v = from; v <= to; v += step) out.push_back(v);
  return out;
}

int run_sweep(const ClusterOptions& o, const std::string& param, const std::vector<long>& values,
              const std::string& output) {
  const sgec::DataMatrix X = sgec::load_matrix(o.input, sgec::parse_format(o.format));
  const auto truth = read_truth(o.labels, X.samples());

  std::ofstream file;
  if (!output.empty()) {
    file.open(output, std::ios::binary);
    if (!file) throw sgec::IoError("cannot write '" + output + "'");
  }
  std::ostream& out = output.empty() ? std::cout : file;
  out << param << ",acc,nmi,purity,iterations,seconds\n";
  out << std::setprecision(10);

  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    sgec::FitConfig cfg = to_config(o);
    cfg.seed = o.seed + idx;
    if (param == "neighbors")
      cfg.neighbors = static_cast<int>(values[idx]);
    else
      cfg.target_dim = values[idx];
    const sgec::FitReport report = sgec::fit(X, cfg);
    out << values[idx] << ',';
    if (truth) {
      const sgec::Metrics m = sgec::evaluate(report.assignment, *truth);
      out << m.acc << ',' << m.nmi << ',' << m.purity;
    } else {
      out << ",,";
    }
    out << ',' << report.outer_iters << ',' << report.wall_time << '\n';
  }
  if (!out) throw sgec::IoError("write failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-supervised graph-embedding clustering"};
  app.require_subcommand(1);

  ClusterOptions cluster_opts;
  std::string report_path, assignment_path;
  auto* cluster = app.add_subcommand("cluster", "Cluster a sample matrix");
  add_cluster_flags(*cluster, cluster_opts);
  cluster->add_option("--output", report_path, "Write a JSON run report here");
  cluster->add_option("--assignments", assignment_path, "Write one cluster id per line here");

  std::string pred_path, truth_path;
  auto* eval = app.add_subcommand("eval", "Score predicted labels against ground truth");
  eval->add_option("--pred", pred_path, "Predicted labels, one per line")->required();
  eval->add_option("--truth", truth_path, "Ground-truth labels, one per line")->required();

  ClusterOptions sweep_opts;
  std::string param = "neighbors", sweep_out;
  std::vector<long> listed;
  long from = 0, to = -1, step = 1;
  auto* sweep = app.add_subcommand("sweep", "Vary --neighbors or --dim and emit one CSV row per setting");
  add_cluster_flags(*sweep, sweep_opts);
  sweep->add_option("--param", param, "neighbors | dim")->check(CLI::IsMember({"neighbors", "dim"}));
  sweep->add_option("--values", listed, "Comma-separated parameter values")->delimiter(',');
  sweep->add_option("--from", from, "First value of a range");
  sweep->add_option("--to", to, "Last value of a range (inclusive)");
  sweep->add_option("--step", step, "Range increment");
  sweep->add_option("--output", sweep_out, "CSV destination (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*cluster) return run_cluster(cluster_opts, report_path, assignment_path);
    if (*eval) return run_eval(pred_path, truth_path);
    if (*sweep) return run_sweep(sweep_opts, param, sweep_values(listed, from, to, step), sweep_out);
  } catch (const sgec::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sgec::exit_code(e.kind());
  }
  return 1;
}
