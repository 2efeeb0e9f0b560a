#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "flybot/flybot.hpp"
#include "flybot/io/json.hpp"
#include "schema_check.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using flybot::raster::Image;

namespace {

struct CliResult {
  int exit = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("flybot_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  CliResult run(const std::string& args) const {
    const std::string err_path = path("stderr.txt");
    const std::string cmd = std::string(FLYBOT_CLI) + " " + args + " 2>" + err_path;
    CliResult r;
    FILE* p = popen(cmd.c_str(), "r");
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream e(err_path);
    r.err.assign(std::istreambuf_iterator<char>(e), std::istreambuf_iterator<char>());
    return r;
  }

  std::string write_image(const std::string& name, const Image& img) const {
    const auto bytes = flybot::raster::write_pnm(img);
    std::ofstream(path(name), std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()),
                                                      static_cast<std::streamsize>(bytes.size()));
    return path(name);
  }

  std::string write_text(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  static json schema(const std::string& sub) {
    return flybot::io::read_json_file(std::string(FLYBOT_ASSETS) + "/schemas/" + sub + ".schema.json");
  }

  static void expect_valid(const std::string& sub, const std::string& out) {
    const json doc = json::parse(out);
    const auto errors = schema::validate(doc, schema(sub));
    EXPECT_TRUE(errors.empty()) << sub << ": " << (errors.empty() ? "" : errors.front());
  }

  Image rgb_half_green() const {
    Image img(10, 10, 3, 100);
    for (int y = 0; y < 10; ++y)
      for (int x = 0; x < 5; ++x) img.at(x, y, 0) = 30, img.at(x, y, 1) = 180, img.at(x, y, 2) = 30;
    return img;
  }

  Image bimodal() const {
    Image img(8, 8, 1, 40);
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 8; ++x) img.at(x, y) = 210;
    return img;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ThrustMatchesReferenceTable) {
  const CliResult r = run("thrust --mass-table " + std::string(FLYBOT_ASSETS) + "/table1.csv --rotors 4 --safety 1.2");
  ASSERT_EQ(r.exit, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["total_g"], 32019);
  EXPECT_NEAR(j["per_rotor_kgf"].get<double>(), 19.2114, 1e-9);
  expect_valid("thrust", r.out);
}

TEST_F(Cli, ThermalBothDirections) {
  CliResult r = run("thermal --to-radiance 300");
  ASSERT_EQ(r.exit, 0);
  EXPECT_NEAR(json::parse(r.out)["radiance_w_m2"].get<double>(), 459.3003, 1e-4);
  expect_valid("thermal", r.out);
  r = run("thermal --to-temp 459.300327939");
  ASSERT_EQ(r.exit, 0);
  EXPECT_NEAR(json::parse(r.out)["temperature_k"].get<double>(), 300.0, 1e-6);
  expect_valid("thermal", r.out);
  EXPECT_EQ(run("thermal").exit, 2);
  EXPECT_EQ(run("thermal --to-temp 1 --to-radiance 1").exit, 2);
  EXPECT_EQ(run("thermal --to-temp -5").exit, 2);
}

TEST_F(Cli, OtsuWritesMaskAndValidates) {
  const std::string in = write_image("b.pgm", bimodal());
  const CliResult r = run("otsu " + in + " --out " + path("mask.pgm"));
  ASSERT_EQ(r.exit, 0) << r.err;
  expect_valid("otsu", r.out);
  EXPECT_DOUBLE_EQ(json::parse(r.out)["foreground_fraction"].get<double>(), 0.5);
  const Image mask = flybot::raster::read_pnm_file(path("mask.pgm"));
  EXPECT_EQ(mask.at(0, 0), 255);
  EXPECT_EQ(mask.at(0, 7), 0);
}

TEST_F(Cli, OtsuOnConstantImageIsDomainError) {
  const std::string in = write_image("flat.pgm", Image(6, 6, 1, 99));
  const CliResult r = run("otsu " + in + " --out " + path("mask.pgm"));
  EXPECT_EQ(r.exit, 1);
  EXPECT_NE(r.err.find("DegenerateHistogram"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(fs::exists(path("mask.pgm")));
  EXPECT_FALSE(fs::exists(path("mask.pgm.partial")));
}

TEST_F(Cli, GreenDensityAndDose) {
  const std::string in = write_image("g.ppm", rgb_half_green());
  CliResult r = run("green-density " + in + " --mask " + path("m.pgm"));
  ASSERT_EQ(r.exit, 0) << r.err;
  expect_valid("green-density", r.out);
  EXPECT_DOUBLE_EQ(json::parse(r.out)["density"].get<double>(), 0.5);
  EXPECT_TRUE(fs::exists(path("m.pgm")));

  r = run("dose " + in);
  ASSERT_EQ(r.exit, 0) << r.err;
  expect_valid("dose", r.out);
  EXPECT_NEAR(json::parse(r.out)["dose"].get<double>(), 5.0, 0.05);
  const CliResult with_file = run("dose " + in + " --system " + std::string(FLYBOT_ASSETS) + "/dose_system.json");
  EXPECT_EQ(with_file.out, r.out);

  const std::string gray = write_image("gray.pgm", Image(4, 4, 1));
  EXPECT_EQ(run("green-density " + gray).exit, 1);
}

TEST_F(Cli, HoughSubcommands) {
  Image lines(11, 11, 1);
  for (int y = 0; y < 11; ++y) lines.at(5, y) = 255;
  CliResult r = run("detect-lines " + write_image("l.pgm", lines) + " --min-votes 11");
  ASSERT_EQ(r.exit, 0) << r.err;
  expect_valid("detect-lines", r.out);
  const json l = json::parse(r.out)["lines"];
  ASSERT_FALSE(l.empty());
  EXPECT_EQ(l[0]["rho"], 5);
  EXPECT_EQ(l[0]["theta"], 0.0);

  Image circle(21, 21, 1);
  for (int a = 0; a < 360; a += 3) {
    const double t = a * std::numbers::pi / 180;
    circle.at(static_cast<int>(std::lround(10 + 5 * std::cos(t))), static_cast<int>(std::lround(10 + 5 * std::sin(t)))) = 255;
  }
  r = run("detect-circles " + write_image("c.pgm", circle) + " --r-min 3 --r-max 7");
  ASSERT_EQ(r.exit, 0) << r.err;
  expect_valid("detect-circles", r.out);
  const json c = json::parse(r.out)["circles"];
  ASSERT_FALSE(c.empty());
  EXPECT_LE(std::abs(c[0]["cx"].get<int>() - 10), 1);
  EXPECT_LE(std::abs(c[0]["r"].get<int>() - 5), 1);
  EXPECT_EQ(run("detect-circles " + path("c.pgm") + " --r-min 7 --r-max 3").exit, 2);
}

TEST_F(Cli, InspectSidewalk) {
  flybot::sidewalk::SidewalkSpec spec;
  spec.erased_blocks = {4};
  const std::string in = write_image("s.pgm", flybot::sidewalk::generate_sidewalk(spec));
  const CliResult r = run("inspect-sidewalk " + in + " --overlay " + path("o.pgm") + " --report " + path("r.json"));
  ASSERT_EQ(r.exit, 0) << r.err;
  expect_valid("inspect-sidewalk", r.out);
  EXPECT_EQ(json::parse(r.out)["flagged"], json::array({4}));
  EXPECT_TRUE(fs::exists(path("o.pgm")));
  std::ifstream rep(path("r.json"));
  EXPECT_EQ(json::parse(rep)["flagged"], json::array({4}));

  const std::string flat = write_image("flat.pgm", Image(192, 64, 1, 120));
  const CliResult none = run("inspect-sidewalk " + flat + " --overlay " + path("o2.pgm"));
  EXPECT_EQ(none.exit, 1);
  EXPECT_NE(none.err.find("NoStripFound"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("o2.pgm")));
}

TEST_F(Cli, SimulateShortRun) {
  const std::string cfg = write_text("sim.json", R"({"duration": 1.0, "trajectory": [
    {"t": 0, "azimuth": 0, "extension": 1}, {"t": 1, "azimuth": 36, "extension": 1}]})");
  const CliResult r = run("simulate --config " + cfg + " --trace " + path("t.csv"));
  ASSERT_EQ(r.exit, 0) << r.err;
  expect_valid("simulate", r.out);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["steps"], 1000);
  EXPECT_LT(j["max_thrust_sum_error_n"].get<double>(), 1e-9);
  std::ifstream trace(path("t.csv"));
  int lines = 0;
  for (std::string line; std::getline(trace, line);) ++lines;
  EXPECT_EQ(lines, 1002);
  EXPECT_EQ(run("simulate --config " + write_text("bad.json", R"({"bogus": 1})")).exit, 2);
}

TEST_F(Cli, NnDemoModes) {
  CliResult r = run("nn-demo --gradient-check --seed 3 --activation relu");
  ASSERT_EQ(r.exit, 0) << r.err;
  expect_valid("nn-demo", r.out);
  EXPECT_LT(json::parse(r.out)["max_relative_error"].get<double>(), 1e-6);
  r = run("nn-demo --diagnose --layers 4,8,8,1");
  ASSERT_EQ(r.exit, 0) << r.err;
  expect_valid("nn-demo", r.out);
  EXPECT_EQ(run("nn-demo").exit, 2);
  EXPECT_EQ(run("nn-demo --diagnose --layers 4").exit, 2);
  EXPECT_EQ(run("nn-demo --diagnose --activation tanh").exit, 2);
}

TEST_F(Cli, ByteIdenticalReruns) {
  const std::string in = write_image("g.ppm", rgb_half_green());
  for (const std::string& args :
       {std::string("nn-demo --diagnose --seed 9"), std::string("nn-demo --gradient-check --seed 9"),
        "dose " + in, "thrust --mass-table " + std::string(FLYBOT_ASSETS) + "/table1.csv --rotors 8"}) {
    const CliResult a = run(args);
    const CliResult b = run(args);
    EXPECT_EQ(a.exit, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST_F(Cli, ExitCodeContractOnMalformedInputs) {
  const std::string good = write_image("ok.pgm", bimodal());
  const std::vector<std::pair<std::string, std::string>> files{
      {"empty.pgm", ""},
      {"magic.pgm", "P9 1 1 255\n\x01"},
      {"short.pgm", "P5 4 4 255\n\x01"},
      {"maxval.pgm", "P2 1 1 1000 5"},
      {"text.pgm", "hello world"},
  };
  for (const auto& [name, body] : files) {
    const std::string p = write_text(name, body);
    for (const char* sub : {"otsu", "green-density", "dose", "detect-lines", "inspect-sidewalk"}) {
      const CliResult r = run(std::string(sub) + " " + p);
      EXPECT_EQ(r.exit, 2) << sub << " " << name;
      EXPECT_TRUE(r.out.empty()) << sub << " " << name;
      EXPECT_FALSE(r.err.empty()) << sub << " " << name;
    }
  }
  EXPECT_EQ(run("otsu " + path("missing.pgm")).exit, 2);
  EXPECT_EQ(run("frobnicate").exit, 2);
  EXPECT_EQ(run("otsu").exit, 2);
  EXPECT_EQ(run("thrust --mass-table " + write_text("neg.csv", "name,grams,count\nx,-3,1\n") + " --rotors 4").exit, 2);
  EXPECT_EQ(run("thrust --mass-table " + std::string(FLYBOT_ASSETS) + "/table1.csv --rotors 5").exit, 2);
  EXPECT_EQ(run("thrust --mass-table " + std::string(FLYBOT_ASSETS) + "/table1.csv --rotors 4 --safety 0.5").exit, 2);
  EXPECT_EQ(run("dose " + good + " --system " + write_text("sys.json", "{\"format\":\"nope\"}")).exit, 2);
  EXPECT_EQ(run("--help").exit, 0);
}

TEST_F(Cli, FailedRunLeavesNoPartialOutputs) {
  const std::string bad = write_text("bad.pgm", "P5 9 9 255\n");
  const CliResult r = run("otsu " + bad + " --out " + path("never.pgm"));
  EXPECT_EQ(r.exit, 2);
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const auto name = entry.path().filename().string();
    EXPECT_EQ(name.find("never"), std::string::npos) << name;
  }
}
