// Copyright 2026 The permflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "permflow/cli/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "permflow/cli/io.hpp"
#include "permflow/error.hpp"
#include "permflow/permanent.hpp"
#include "permflow/sampling.hpp"
#include "test_support.hpp"

namespace permflow::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = run(args, out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("permflow_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string matrix_file(const std::string& name, const ComplexMatrix& m) const {
    write_matrix(path(name), m);
    return path(name);
  }

  fs::path dir_;
};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string value_line(const std::string& out) {
  for (const std::string& line : lines_of(out))
    if (line.rfind("value: ", 0) == 0) return line.substr(7);
  return {};
}

TEST_F(CliTest, MatrixRoundTripIsBitIdentical) {
  const ComplexMatrix a = testing::random_matrix(5, 3, 4);
  matrix_file("a.json", a);
  EXPECT_EQ(read_matrix(path("a.json")), a);
  const ComplexMatrix u = haar_random_unitary(7, 2);
  EXPECT_EQ(matrix_from_text(matrix_to_text(u)), u);
}

TEST_F(CliTest, PermExamples) {
  const std::string id4 = matrix_file("id4.json", ComplexMatrix::identity(4));
  Outcome r = invoke({"perm", "--input", id4, "--engine", "bbfg-gray"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.err.empty());
  EXPECT_EQ(value_line(r.out), "1+0i");
  EXPECT_NE(r.out.find("engine: bbfg-gray"), std::string::npos);
  EXPECT_NE(r.out.find("addends: 8"), std::string::npos);
  EXPECT_NE(r.out.find("elapsed_seconds: "), std::string::npos);

  const std::string ones3 = matrix_file("ones3.json", ComplexMatrix(3, 3, std::vector<Complex>(9, 1.0)));
  r = invoke({"perm", "--input", ones3, "--engine", "ryser"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(value_line(r.out), "6+0i");
}

TEST_F(CliTest, PermMultiplicitiesMatchExpansion) {
  const ComplexMatrix a = testing::random_matrix(3, 3, 12);
  const std::string file = matrix_file("a.json", a);
  const std::string result = path("result.json");
  const Outcome r = invoke({"perm", "--input", file, "--engine", "bbfg-repeated", "--row-mult", "1,2,2",
                            "--col-mult", "2,2,1", "--extended", "--output", result});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto expected = perm_naive(expand_multiplicities(a, {1, 2, 2}, {2, 2, 1})).value;
  const std::string doc = read_file(result);
  const auto parsed = invoke({"perm", "--input", file, "--engine", "naive", "--row-mult", "1,2,2", "--col-mult",
                              "2,2,1", "--extended"});
  ASSERT_EQ(parsed.status, 0);
  EXPECT_NE(doc.find("\"engine\""), std::string::npos);
  // Both engines print the same leading digits.
  EXPECT_EQ(value_line(r.out).substr(0, 10), value_line(parsed.out).substr(0, 10));
  std::istringstream in(value_line(r.out));
  long double re = 0;
  in >> re;
  EXPECT_NEAR(static_cast<double>(re), static_cast<double>(expected.real()), 1e-10 * std::abs(expected));
}

TEST_F(CliTest, PermEnginesAndPrecisions) {
  const std::string file = matrix_file("u.json", haar_random_unitary(6, 3));
  for (const std::vector<std::string>& extra :
       {std::vector<std::string>{"--engine", "multiprecision", "--bits", "128"},
        std::vector<std::string>{"--engine", "fixed"}, std::vector<std::string>{"--engine", "fixed", "--streams", "4"},
        std::vector<std::string>{"--engine", "ryser-nw", "--workers", "3"},
        std::vector<std::string>{"--engine", "bbfg", "--pockets"}}) {
    std::vector<std::string> args = {"perm", "--input", file};
    args.insert(args.end(), extra.begin(), extra.end());
    const Outcome r = invoke(args);
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_FALSE(value_line(r.out).empty());
  }
}

TEST_F(CliTest, ExitStatusIsNonzeroExactlyWithDiagnostics) {
  const std::string file = matrix_file("u.json", haar_random_unitary(3, 3));
  const std::vector<std::vector<std::string>> failing = {
      {"perm", "--input", path("missing.json")},
      {"perm", "--input", file, "--double", "--extended"},
      {"perm", "--input", file, "--engine", "nonsense"},
      {"perm", "--input", file, "--frobnicate"},
      {"perm"},
      {"bench", "--n-list", "", "--m-list", "4"},
      {"fit", "--input", path("missing.csv")},
  };
  for (const auto& args : failing) {
    const Outcome r = invoke(args);
    EXPECT_NE(r.status, 0) << args.back();
    EXPECT_FALSE(r.err.empty()) << args.back();
  }
  const Outcome ok = invoke({"perm", "--input", file});
  EXPECT_EQ(ok.status, 0);
  EXPECT_TRUE(ok.err.empty());
}

TEST_F(CliTest, GenUnitary) {
  const Outcome r = invoke({"gen-unitary", "--modes", "5", "--seed", "9", "--output", path("u.json")});
  ASSERT_EQ(r.status, 0) << r.err;
  const ComplexMatrix u = read_matrix(path("u.json"));
  EXPECT_EQ(u, haar_random_unitary(5, 9));
  EXPECT_LT(unitarity_defect(u), 1e-12);
}

TEST_F(CliTest, SampleHongOuMandel) {
  const double h = 1.0 / std::sqrt(2.0);
  const std::string bs = matrix_file("bs.json", ComplexMatrix(2, 2, {h, h, h, -h}));
  const Outcome r = invoke({"sample", "--unitary", bs, "--input-state", "1,1", "--samples", "1000", "--seed", "1",
                            "--output", path("s.txt")});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto lines = lines_of(read_file(path("s.txt")));
  ASSERT_EQ(lines.size(), 1000u);
  for (const std::string& line : lines) {
    EXPECT_NE(line, "1,1");
    EXPECT_TRUE(line == "2,0" || line == "0,2") << line;
  }
  EXPECT_NE(r.out.find("mean_photons: 2"), std::string::npos);
}

TEST_F(CliTest, SampleZeroCount) {
  const Outcome r =
      invoke({"sample", "--modes", "4", "--photons", "2", "--samples", "0", "--output", path("empty.txt")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(read_file(path("empty.txt")).empty());
  EXPECT_NE(r.out.find("samples: 0"), std::string::npos);
}

TEST_F(CliTest, SampleOutputIsReproducible) {
  const std::vector<std::string> base = {"sample", "--modes", "5", "--photons", "3", "--samples", "200",
                                         "--seed", "77", "--loss", "0.8"};
  auto args = base;
  args.insert(args.end(), {"--output", path("a.txt")});
  ASSERT_EQ(invoke(args).status, 0);
  args = base;
  args.insert(args.end(), {"--output", path("b.txt"), "--workers", "2"});
  ASSERT_EQ(invoke(args).status, 0);
  EXPECT_EQ(read_file(path("a.txt")), read_file(path("b.txt")));
  EXPECT_EQ(lines_of(read_file(path("a.txt"))).size(), 200u);
}

TEST_F(CliTest, SampleUnitTransmissionMatchesIdeal) {
  const std::string u = matrix_file("u.json", haar_random_unitary(4, 5));
  const std::vector<std::string> base = {"sample", "--unitary", u, "--input-state", "1,1,0,0", "--samples", "20000"};
  auto a = base;
  a.insert(a.end(), {"--seed", "1", "--output", path("ideal.txt")});
  auto b = base;
  b.insert(b.end(), {"--seed", "2", "--loss", "1.0", "--output", path("lossy.txt")});
  ASSERT_EQ(invoke(a).status, 0);
  ASSERT_EQ(invoke(b).status, 0);
  auto records = [](const std::string& text) {
    std::vector<SampleRecord> out;
    for (const std::string& line : lines_of(text)) {
      SampleRecord r;
      r.output_state = OccupationVector::parse(line);
      out.push_back(r);
    }
    return out;
  };
  const auto x = records(read_file(path("ideal.txt"))), y = records(read_file(path("lossy.txt")));
  EXPECT_LT(total_variation(x, y), 3.0 * std::sqrt(2.0 * 10 / 20000.0));
}

TEST_F(CliTest, AccuracyTableShape) {
  const Outcome r = invoke({"accuracy", "--min-n", "2", "--max-n", "10", "--trials", "20", "--engines",
                            "bbfg-gray-double,ryser-double", "--output", path("acc.csv")});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto lines = lines_of(read_file(path("acc.csv")));
  ASSERT_EQ(lines.size(), 1u + 2 * 9);
  EXPECT_EQ(lines[0], kAccuracyHeader);
  EXPECT_EQ(lines[1].rfind("bbfg-gray-double,2,20,", 0), 0u);
  EXPECT_EQ(lines[18].rfind("ryser-double,10,20,", 0), 0u);
}

TEST_F(CliTest, AccuracyOracleAgainstItself) {
  const Outcome r = invoke({"accuracy", "--min-n", "2", "--max-n", "5", "--trials", "3", "--engines", "oracle"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 5u);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    EXPECT_EQ(lines[i].substr(lines[i].size() - 4), ",0,0") << lines[i];
  }
}

TEST_F(CliTest, BenchAndFit) {
  const Outcome bench = invoke({"bench", "--n-list", "2,3,4", "--m-list", "8", "--eta-list", "1", "--samples", "5",
                                "--output", path("bench.csv")});
  ASSERT_EQ(bench.status, 0) << bench.err;
  const auto records = bench_from_csv(read_file(path("bench.csv")));
  ASSERT_EQ(records.size(), 3u);
  for (const BenchRecord& r : records) EXPECT_GT(r.seconds_per_sample, 0.0);
  const Outcome fit = invoke({"fit", "--input", path("bench.csv")});
  ASSERT_EQ(fit.status, 0) << fit.err;
  EXPECT_EQ(fit.out.rfind("T0: ", 0), 0u);
  EXPECT_NE(fit.out.find("residual: "), std::string::npos);
}

TEST_F(CliTest, BenchTimeGrowsWithPhotons) {
  const Outcome bench = invoke({"bench", "--n-list", "2,4,6,8", "--m-list", "20", "--eta-list", "1", "--samples",
                                "20", "--output", path("bench.csv")});
  ASSERT_EQ(bench.status, 0) << bench.err;
  const auto records = bench_from_csv(read_file(path("bench.csv")));
  ASSERT_EQ(records.size(), 4u);
  for (std::size_t i = 1; i < records.size(); ++i) {
    EXPECT_GT(records[i].seconds_per_sample, records[i - 1].seconds_per_sample) << records[i].n;
  }
}

TEST_F(CliTest, FitRecoversSyntheticModel) {
  std::vector<BenchRecord> synthetic;
  for (unsigned n = 2; n <= 6; ++n)
    for (unsigned m : {10u, 20u}) {
      BenchRecord r;
      r.n = n;
      r.m = m;
      r.seconds_per_sample = predicted_sampling_time(n, m, 1e-10);
      r.samples = 10;
      synthetic.push_back(r);
    }
  write_file(path("syn.csv"), bench_to_csv(synthetic));
  const Outcome fit = invoke({"fit", "--input", path("syn.csv")});
  ASSERT_EQ(fit.status, 0) << fit.err;
  const double t0 = std::stod(lines_of(fit.out)[0].substr(4));
  EXPECT_NEAR(t0, 1e-10, 1e-13);
}

TEST_F(CliTest, MalformedBenchCsv) {
  write_file(path("bad.csv"), "n,m\n1,2\n");
  const Outcome r = invoke({"fit", "--input", path("bad.csv")});
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("parse"), std::string::npos);
  EXPECT_THROW(bench_from_csv("n,m,eta,seconds_per_sample,samples\n1,2,x,0.1,3\n"), Error);
}

TEST_F(CliTest, EmptyGridIsAnError) {
  const Outcome r = invoke({"bench", "--n-list", "", "--m-list", "8"});
  EXPECT_NE(r.status, 0);
  EXPECT_FALSE(r.err.empty());
}

}  // namespace
}  // namespace permflow::cli
