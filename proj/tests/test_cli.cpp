#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(ENGM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("engm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, RoundTrip) {
  ASSERT_EQ(run("keygen -o " + path("k")), 0);
  EXPECT_EQ(slurp(path("k")).substr(0, 64).size(), 64u);
  {
    std::ofstream(path("pt"), std::ios::binary) << "the quick brown fox\n";
  }
  ASSERT_EQ(run("encrypt -k " + path("k") + " -i " + path("pt") + " -o " + path("ct")), 0);
  ASSERT_EQ(run("decrypt -k " + path("k") + " -i " + path("ct") + " -o " + path("back")), 0);
  EXPECT_EQ(slurp(path("back")), slurp(path("pt")));
  EXPECT_EQ(slurp(path("ct")).substr(0, 4), "ENGM");
}

TEST_F(Cli, KeyReuseNeedsForce) {
  ASSERT_EQ(run("keygen -o " + path("k")), 0);
  std::ofstream(path("pt")) << "x";
  ASSERT_EQ(run("encrypt -k " + path("k") + " -i " + path("pt") + " -o " + path("c1")), 0);
  EXPECT_EQ(run("encrypt -k " + path("k") + " -i " + path("pt") + " -o " + path("c2")), 1);
  EXPECT_EQ(run("encrypt --force -k " + path("k") + " -i " + path("pt") + " -o " + path("c2")), 0);
}

TEST_F(Cli, BadInputs) {
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("encrypt"), 2);
  EXPECT_EQ(run("bench --bytes 0"), 2);
  EXPECT_EQ(run("calibrate --a 1 -o " + path("c.json")), 2);
  std::ofstream(path("badkey")) << "zz";
  std::ofstream(path("pt")) << "x";
  EXPECT_EQ(run("encrypt -k " + path("badkey") + " -i " + path("pt") + " -o " + path("ct")), 1);
  std::ofstream(path("junk")) << "not an envelope";
  ASSERT_EQ(run("keygen -o " + path("k")), 0);
  EXPECT_EQ(run("decrypt -k " + path("k") + " -i " + path("junk") + " -o " + path("out")), 1);
}

TEST_F(Cli, KeystreamGolden) {
  ASSERT_EQ(run("keystream -n 16 -o " + path("ks")), 0);
  const std::string ks = slurp(path("ks"));
  ASSERT_EQ(ks.size(), 16u);
  EXPECT_EQ(static_cast<unsigned char>(ks[0]), 0xee);
  EXPECT_EQ(static_cast<unsigned char>(ks[15]), 0x4f);
}

TEST_F(Cli, TestCommandOnFiles) {
  ASSERT_EQ(run("keystream -n 1000000 -o " + path("ks")), 0);
  const std::string ks = slurp(path("ks"));
  fs::create_directories(dir_ / "seqs");
  for (int i = 0; i < 10; ++i) {
    std::ofstream(dir_ / "seqs" / ("s" + std::to_string(i)), std::ios::binary) << ks.substr(i * 100000, 12500);
  }
  EXPECT_EQ(run("test --input " + path("seqs") + " --bits 100000 -o " + path("report")), 0);
  EXPECT_NE(slurp(path("report")).find("test_name,sequence_index,p_value,pass"), std::string::npos);
}

TEST_F(Cli, MiSelfTestCsv) {
  ASSERT_EQ(run("mi --self-test --bits 100000 --tmax 4 -o " + path("mi.csv")), 0);
  const std::string csv = slurp(path("mi.csv"));
  EXPECT_EQ(csv.rfind("T,", 0), 0u);
  EXPECT_NE(csv.find("\n4,"), std::string::npos);
}
