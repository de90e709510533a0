#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sgec;

namespace {

Matrix parse(const std::string& text, TextFormat fmt = TextFormat::Csv) {
  std::istringstream in(text);
  return parse_matrix(in, fmt);
}

std::size_t failing_line(const std::string& text, TextFormat fmt = TextFormat::Csv) {
  try {
    parse(text, fmt);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sgec_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

RunRecord sample_record() {
  RunRecord r;
  r.config.method = Method::OurMfa;
  r.config.clusters = 3;
  r.config.neighbors = 7;
  r.config.target_dim = 2;
  r.config.beta = 0.125;
  r.config.seed = 42;
  r.config.mfa_distances = MfaAssignmentDistances::NeighborMasked;
  r.input = "data.csv";
  r.assignment = {0, 2, 1, 1, 0};
  r.clusters = 3;
  r.objective_trace = {1.0 / 3.0, 0.1 + 0.2, 1e-300, 12345.678901234567};
  r.outer_iters = 4;
  r.converged = true;
  r.wall_time = 0.5;
  r.started_at = "2024-01-01T00:00:00Z";
  return r;
}

}  // namespace

TEST(ParseMatrix, Csv) {
  Matrix expected(2, 2);
  expected << 0, 1, 2, 3;
  EXPECT_EQ(parse("0,1\n2,3\n"), expected);
  EXPECT_EQ(parse("a,b\n0,1\n2,3\n"), expected);
  EXPECT_EQ(parse("0 , 1\r\n\n2,3"), expected);
}

TEST(ParseMatrix, Whitespace) {
  Matrix expected(2, 3);
  expected << 1, -2.5, 3e2, 4, 5, 6;
  EXPECT_EQ(parse("1 -2.5\t3e2\n  4 5 6\n", TextFormat::Whitespace), expected);
}

TEST(ParseMatrix, ReportsOffendingLine) {
  EXPECT_EQ(failing_line("0,1\n2\n"), 2u);
  EXPECT_EQ(failing_line("0,1\n2,x\n"), 2u);
  EXPECT_EQ(failing_line("h1,h2\n0,1\n\n2,nan\n"), 4u);
  EXPECT_EQ(failing_line("0,1\n1,inf\n"), 2u);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("only,a,header\n"), ParseError);
}

TEST(ParseFormat, Names) {
  EXPECT_EQ(parse_format("csv"), TextFormat::Csv);
  EXPECT_EQ(parse_format("whitespace"), TextFormat::Whitespace);
  EXPECT_THROW(parse_format("tsv"), InvalidInput);
}

TEST(ParseLabels, IntegersWithOptionalHeader) {
  std::istringstream plain("1\n0\n\n2\n");
  EXPECT_EQ(parse_labels(plain), (std::vector<long long>{1, 0, 2}));
  std::istringstream header("label\n-1\n5\n");
  EXPECT_EQ(parse_labels(header), (std::vector<long long>{-1, 5}));
  std::istringstream bad("1\n2.5\n");
  EXPECT_THROW(parse_labels(bad), ParseError);
}

TEST(LoadMatrix, MissingFileIsIoError) {
  EXPECT_THROW(load_matrix("/nonexistent/sgec/x.csv", TextFormat::Csv), IoError);
  EXPECT_THROW(load_labels("/nonexistent/sgec/y.txt"), IoError);
}

TEST(Assignment, WriteOneIdPerLine) {
  std::ostringstream out;
  write_assignment(out, Assignment({2, 0, 1}, 3));
  EXPECT_EQ(out.str(), "2\n0\n1\n");
}

TEST(Report, RoundTripsThroughDisk) {
  const RunRecord r = sample_record();
  const auto path = scratch("report.json").string();
  save_report(r, path);
  const RunRecord back = load_report(path);
  EXPECT_EQ(back.assignment, r.assignment);
  EXPECT_EQ(back.clusters, 3);
  EXPECT_EQ(back.objective_trace, r.objective_trace);
  EXPECT_EQ(back.outer_iters, 4);
  EXPECT_TRUE(back.converged);
  EXPECT_EQ(back.input, "data.csv");
  EXPECT_EQ(back.started_at, r.started_at);
  EXPECT_FALSE(back.metrics.has_value());
  EXPECT_EQ(back.config.method, Method::OurMfa);
  EXPECT_EQ(back.config.neighbors, 7);
  EXPECT_EQ(back.config.target_dim, 2);
  EXPECT_EQ(back.config.beta, 0.125);
  EXPECT_EQ(back.config.seed, 42u);
  EXPECT_EQ(back.config.mfa_distances, MfaAssignmentDistances::NeighborMasked);
  EXPECT_EQ(record_to_json(back), record_to_json(r));
}

TEST(Report, MetricsAreNullOrPresent) {
  RunRecord r = sample_record();
  EXPECT_TRUE(record_to_json(r)["metrics"].is_null());
  EXPECT_EQ(record_to_json(r)["config"]["beta"], 0.125);
  r.config.beta.reset();
  EXPECT_EQ(record_to_json(r)["config"]["beta"], "auto");
  r.metrics = Metrics{0.9, 0.8, 0.95};
  const RunRecord back = record_from_json(record_to_json(r));
  ASSERT_TRUE(back.metrics.has_value());
  EXPECT_EQ(back.metrics->nmi, 0.8);
  EXPECT_FALSE(back.config.beta.has_value());
}

TEST(Report, MalformedFileIsParseError) {
  const auto path = scratch("broken.json").string();
  std::ofstream(path) << "{\"config\": ";
  EXPECT_THROW(load_report(path), ParseError);
  std::ofstream(path) << "{}";
  EXPECT_THROW(load_report(path), ParseError);
}
