#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "conjtm/cli.h"
#include "conjtm/table.h"

namespace conjtm {
namespace {

namespace fs = std::filesystem;
const std::string kData = CONJTM_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "conjtm_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(CliTest, ValidateBrocardAsPrinted) {
  Result r = cli({"validate", kData + "/brocard.tbl"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.out, "state As on read 0")) << r.out;
  EXPECT_TRUE(contains(r.out, "state Pf on read 0")) << r.out;
  EXPECT_TRUE(contains(r.out, "state Ss on read 0")) << r.out;
}

TEST(CliTest, ValidateWithOverlay) {
  Result r = cli({"validate", kData + "/brocard.tbl", "--overlay", kData + "/brocard.ovl"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_TRUE(contains(r.out, " 0 errors")) << r.out;
}

TEST(CliTest, ValidateMissingFile) {
  EXPECT_EQ(cli({"validate", kData + "/nope.tbl"}).code, 2);
}

TEST(CliTest, BBLookup) {
  Result r = cli({"bb", "lookup", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "107\n");
  EXPECT_EQ(cli({"bb", "lookup", "9"}).code, 1);
}

TEST(CliTest, BBBrute) {
  Result r = cli({"bb", "brute", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "BB(1) = 1")) << r.out;
}

TEST(CliTest, RunWindow) {
  Result r = cli({"--deterministic", "run", kData + "/brocard.manifest", "--steps", "5", "--window", "-5..0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "outcome=step-limit steps=5 state=brocard.Af\n")) << r.out;
  EXPECT_TRUE(contains(r.out, "window -5..0: 0 1 1 0 1 1\n")) << r.out;
}

TEST(CliTest, RunTrace) {
  Result r = cli({"run", kData + "/brocard.manifest", "--steps", "2", "--trace", "--window", "-1..1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("0\tbrocard.Df_init\t0\t0 0 0\n", 0), 0u) << r.out;
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"run"}).code, 2);
  EXPECT_EQ(cli({"run", kData + "/brocard.manifest", "--window", "3"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(CliTest, ComposeWritesValidTable) {
  fs::path outfile = scratch("fermat.tbl");
  Result r = cli({"compose", kData + "/fermat.manifest", "-o", outfile.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "composed 92 states")) << r.out;
  RawTable t = load_table(outfile.string());
  EXPECT_FALSE(has_errors(validate(t)));
  EXPECT_EQ(cli({"validate", outfile.string()}).code, 0);
}

TEST(CliTest, VerifyBrocardSuite) {
  fs::path summary = scratch("brocard.json");
  Result r = cli({"--deterministic", "verify", kData + "/scenarios/brocard.scn", "--summary",
                  summary.string()});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "14 passed, 0 failed")) << r.out;
  EXPECT_TRUE(fs::exists(summary));
}

TEST(CliTest, CertifyBBBound) {
  fs::path table = scratch("four.tbl");
  std::ofstream(table) << "!start a\na|0|1|R|b\nb|0|1|R|c\nc|0|1|R|d\nd|0|1|R|a\n";
  Result r = cli({"bb", "certify", table.string(), "--steps", "108"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_TRUE(contains(r.out, "basis bbbound 4 107")) << r.out;
  EXPECT_EQ(cli({"bb", "certify", table.string(), "--steps", "50"}).code, 1);
}

}  // namespace
}  // namespace conjtm
