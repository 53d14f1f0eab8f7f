#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "entcert/cli.hpp"
#include "entcert/serialize.hpp"
#include "support.hpp"

using namespace entcert;
using namespace testing_support;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "entcert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const json& j) {
  const std::string path = testing::TempDir() + name;
  std::ofstream(path) << j.dump();
  return path;
}

}  // namespace

TEST(Cli, CertifyDicke) {
  const Outcome o = invoke({"certify", "--state", "dicke:3,2-1"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_NEAR(j["eg_bits"].get<double>(), 1.169925, 1e-6);
  EXPECT_TRUE(j["equality_certified"].get<bool>());
  EXPECT_EQ(j["certificate"]["verdict"], "Certified");
}

TEST(Cli, MeasureCsv) {
  const Outcome o = invoke({"measure", "--state", "ghz:3", "--format", "csv"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "id,eg,er_upper,lr_upper,certified");
  EXPECT_NE(o.out.find("ghz:3,1,1,1,true"), std::string::npos) << o.out;
}

TEST(Cli, Table1Csv) {
  const Outcome o = invoke({"table1", "--n-max", "3", "--format", "csv"});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream lines(o.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "id,closed_form,eg,er_upper,lr_upper,certified,mismatch");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_NE(line.find(",true,false"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 5);  // 2,1-1  3,2-1  3,1-1-1  antisym 2, 3
  EXPECT_NE(o.out.find("dicke:3,2-1,1.169925"), std::string::npos);
}

TEST(Cli, DiscriminateGhz) {
  const Outcome o = invoke({"discriminate", "--ensemble", "ghz3-xorbit"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_EQ(j["N"], 8);
  EXPECT_NEAR(j["upper_bound"].get<double>(), 0.5, 1e-9);
  EXPECT_NEAR(j["lower_bound_G"]["sum_form"].get<double>(), 0.5, 1e-9);
  EXPECT_NEAR(j["achieved"].get<double>(), 0.5, 1e-9);
  EXPECT_NEAR(j["lower_bound_R"]["purity_form"].get<double>(), 0.5, 1e-8);
  EXPECT_TRUE(j["locc_projective"].get<bool>());
}

TEST(Cli, WitnessGhz) {
  const Outcome o = invoke({"witness", "--state", "ghz:3", "--samples", "2000"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_NEAR(j["expectation"].get<double>(), -1.0, 1e-8);
  EXPECT_NEAR(j["predicted_robustness"].get<double>(), 1.0, 1e-8);
  EXPECT_FALSE(j["validity"]["violation"].get<bool>());
}

TEST(Cli, ByteIdenticalReruns) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"measure", "--state", "dicke:4,2-1-1", "--seed", "5"},
        std::vector<std::string>{"discriminate", "--ensemble", "bell-xorbit", "--threads", "3"},
        std::vector<std::string>{"witness", "--state", "antisym:3", "--samples", "500"}}) {
    const Outcome a = invoke(args), b = invoke(args);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, FileDescriptors) {
  const std::string stab = write_temp("entcert_stab.json", to_json(linear_cluster_stabilizers(3)));
  Outcome o = invoke({"certify", "--state", "stab:@" + stab});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NEAR(json::parse(o.out)["eg_bits"].get<double>(), 1.0, 1e-8);

  Rng rng(91);
  const std::string prod = write_temp("entcert_prod.json", to_json(random_product(rng, {2, 2})));
  o = invoke({"measure", "--state", "product:@" + prod, "--require-certified"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NEAR(json::parse(o.out)["eg_bits"].get<double>(), 0.0, 1e-9);
}

TEST(Cli, RequireCertifiedExitCode) {
  Rng rng(92);
  const std::string path = write_temp("entcert_pure.json", to_json(random_state(rng, {2, 2, 2})));
  EXPECT_EQ(invoke({"measure", "--state", "pure:@" + path}).code, 0);
  const Outcome o = invoke({"measure", "--state", "pure:@" + path, "--require-certified"});
  EXPECT_EQ(o.code, 3);
  EXPECT_FALSE(json::parse(o.out)["equality_certified"].get<bool>());
}

TEST(Cli, InvalidInputs) {
  EXPECT_EQ(invoke({"measure", "--state", "bogus:3"}).code, 2);
  EXPECT_EQ(invoke({"measure", "--state", "dicke:3,1-1"}).code, 2);
  EXPECT_EQ(invoke({"measure", "--state", "pure:@/nonexistent.json"}).code, 2);
  EXPECT_EQ(invoke({"discriminate", "--ensemble", "nope"}).code, 2);
  EXPECT_EQ(invoke({"table1", "--n-max", "9"}).code, 2);
  EXPECT_EQ(invoke({"measure", "--frobnicate"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
}

TEST(Cli, JsonErrors) {
  const Outcome o = invoke({"measure", "--state", "bogus:3", "--json-errors"});
  EXPECT_EQ(o.code, 2);
  const json j = json::parse(o.err);
  EXPECT_EQ(j["error"]["kind"], "InvalidInput");
  EXPECT_EQ(j["exit_code"], 2);
}

TEST(Cli, Help) {
  const Outcome o = invoke({"--help"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("table1"), std::string::npos);
}

TEST(Cli, DimensionCapFromEnvironment) {
  setenv("ENTCERT_MAX_DIM", "10", 1);
  EXPECT_EQ(invoke({"measure", "--state", "ghz:4"}).code, 2);
  setenv("ENTCERT_MAX_DIM", "abc", 1);
  EXPECT_EQ(invoke({"measure", "--state", "ghz:2"}).code, 2);
  setenv("ENTCERT_MAX_DIM", "64", 1);
  EXPECT_EQ(invoke({"measure", "--state", "ghz:4"}).code, 0);
  unsetenv("ENTCERT_MAX_DIM");
  set_max_dimension(kDefaultMaxDim);
}

TEST(Cli, OutputFile) {
  const std::string path = testing::TempDir() + "entcert_out.csv";
  const Outcome o = invoke({"certify", "--state", "antisym:2", "--format", "csv", "--output", path});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "id,eg,er_upper,lr_upper,certified");
}
