#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mixsimplex/cli.hpp"

using namespace mixsimplex;
namespace fs = std::filesystem;

namespace {

const fs::path kSamples = MIXSIMPLEX_SAMPLES_DIR;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mixsimplex");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Fresh scratch directory per test.
fs::path scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() /
                 (std::string("mixsimplex_") + info->test_suite_name() + "_" + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, WorkedExampleIsUnsat) {
  std::string file = (kSamples / "worked_example.lra").string();
  CliRun r = cli({file});
  EXPECT_EQ(r.code, kExitUnsat);
  EXPECT_EQ(r.out, "unsat\n");
  CliRun c = cli({"--certify", file});
  EXPECT_EQ(c.code, kExitUnsat);
  EXPECT_EQ(c.out, "unsat\n0 1\n1 2\n2 1\n");
  EXPECT_EQ(cli({"--mode", "rational", "--certify", file}).out, c.out);
}

TEST(Cli, CertifiedSatPointVerifies) {
  for (const char* name : {"strict_box.lra", "equalities.lra", "dense_20x10_seed4.lra"}) {
    std::string file = (kSamples / name).string();
    auto sys = parse(read_file(file));
    for (const char* mode : {"mixed", "rational"}) {
      CliRun r = cli({"--certify", "--mode", mode, file});
      ASSERT_EQ(r.code, kExitSat) << name;
      std::istringstream is(r.out);
      auto v = read_verdict(is, sys.var_names);
      ASSERT_TRUE(v) << r.out;
      ASSERT_TRUE(v->sat());
      EXPECT_TRUE(verify_sat(v->point, sys.constraints)) << name << " " << mode;
    }
  }
}

TEST(Cli, CertifiedUnsatVerifies) {
  std::string file = (kSamples / "strict_conflict.lra").string();
  auto sys = parse(read_file(file));
  CliRun r = cli({"--certify", file});
  ASSERT_EQ(r.code, kExitUnsat);
  std::istringstream is(r.out);
  auto v = read_verdict(is, sys.var_names);
  ASSERT_TRUE(v);
  EXPECT_TRUE(verify_unsat(v->certificate, sys.constraints));
}

TEST(Cli, EmptyFileIsSat) {
  auto dir = scratch();
  CliRun r = cli({write(dir / "empty.lra", "").string()});
  EXPECT_EQ(r.code, kExitSat);
  EXPECT_EQ(r.out, "sat\n");
  CliRun c = cli({"--certify", write(dir / "comments.lra", "# nothing\n\n").string()});
  EXPECT_EQ(c.code, kExitSat);
  EXPECT_EQ(c.out, "sat\n");
}

TEST(Cli, MalformedInputExitsWithUsageCode) {
  auto dir = scratch();
  for (const char* text : {"1 x <=\n", "1 x + 1 y <= 2\n", "1 x ~ 2\n", "1 2x <= 3\n"}) {
    CliRun r = cli({write(dir / "bad.lra", text).string()});
    EXPECT_EQ(r.code, kExitUsage) << text;
    EXPECT_NE(r.err.find("parse error"), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());
  }
  EXPECT_EQ(cli({(dir / "missing.lra").string()}).code, kExitUsage);
  EXPECT_EQ(cli({"--mode", "bogus", (kSamples / "worked_example.lra").string()}).code, kExitUsage);
}

TEST(Cli, FastMode) {
  CliRun unsat = cli({"--mode", "fast", (kSamples / "worked_example.lra").string()});
  EXPECT_EQ(unsat.code, kExitUnsat);
  EXPECT_EQ(unsat.out, "unsat\n");
  CliRun sat = cli({"--mode", "fast", (kSamples / "strict_box.lra").string()});
  EXPECT_EQ(sat.code, 0);
  EXPECT_EQ(sat.out, "likely-sat\n");
}

TEST(Cli, GeneratorIsDeterministic) {
  CliRun a = cli({"--gen", "5", "3", "10", "--seed", "7"});
  CliRun b = cli({"--gen", "5", "3", "10", "--seed", "7"});
  CliRun c = cli({"--gen", "5", "3", "10", "--seed", "8"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(a.out, generate({5, 3, 10, 7}));
  auto sys = parse(a.out);
  EXPECT_EQ(sys.constraints.size(), 5u);
  for (const auto& con : sys.constraints) {
    EXPECT_EQ(con.relation, Relation::Le);
    for (const auto& t : con.terms) {
      EXPECT_LE(t.coef.abs(), Rat(10));
      EXPECT_TRUE(t.coef.is_integer());
    }
  }
  EXPECT_EQ(cli({"--gen", "0", "3", "10"}).code, kExitUsage);
}

TEST(Cli, BenchOnEmptyDirectoryPrintsHeaderOnly) {
  auto dir = scratch();
  CliRun r = cli({"--bench", dir.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, std::string(kBenchHeader) + "\n");
}

TEST(Cli, BenchOverSamples) {
  CliRun r = cli({"--bench", kSamples.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto ls = lines(r.out);
  auto files = corpus_files(kSamples);
  ASSERT_EQ(ls.size(), 1 + 2 * files.size() + 2 + 1);
  EXPECT_EQ(ls[0], kBenchHeader);
  for (std::size_t i = 0; i < files.size(); ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      const std::string& row = ls[1 + 2 * i + k];
      EXPECT_EQ(row.rfind(files[i].filename().string() + (k ? ",mixed," : ",rational,"), 0), 0u) << row;
      EXPECT_EQ(row.back(), '1') << row;  // agree
      EXPECT_EQ(std::count(row.begin(), row.end(), ','), 8);
    }
  }
  EXPECT_EQ(ls[1 + 2 * files.size()].rfind("summary,rational,", 0), 0u);
  EXPECT_EQ(ls[2 + 2 * files.size()].rfind("summary,mixed,", 0), 0u);
  EXPECT_EQ(ls.back().rfind("# reference", 0), 0u);
}

TEST(Cli, BenchSingleMode) {
  CliRun r = cli({"--bench", kSamples.string(), "--modes", "mixed"});
  ASSERT_EQ(r.code, 0);
  auto ls = lines(r.out);
  EXPECT_EQ(ls.size(), 1 + corpus_files(kSamples).size() + 1 + 1);
  EXPECT_EQ(r.out.find(",rational,"), std::string::npos);
}

TEST(Cli, StatsAppendsCsvRows) {
  auto dir = scratch();
  std::string stats = (dir / "stats.csv").string();
  std::string file = (kSamples / "worked_example.lra").string();
  EXPECT_EQ(cli({"--stats", stats, file}).code, kExitUnsat);
  EXPECT_EQ(cli({"--stats", stats, "--mode", "rational", file}).code, kExitUnsat);
  auto ls = lines(read_file(stats));
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], kBenchHeader);
  EXPECT_EQ(ls[1].rfind(file + ",mixed,unsat,", 0), 0u) << ls[1];
  EXPECT_EQ(ls[2].rfind(file + ",rational,unsat,", 0), 0u) << ls[2];
}

TEST(Cli, FloatOptionsAreAccepted) {
  std::string file = (kSamples / "dense_20x10_seed4.lra").string();
  for (auto args : std::vector<std::vector<std::string>>{
           {"--float-algo", "primal", file},
           {"--iter-cap", "1", file},
           {"--tol-feas", "1e-6", "--tol-pivot", "1e-8", file}}) {
    EXPECT_EQ(cli(args).code, kExitSat);
  }
}
