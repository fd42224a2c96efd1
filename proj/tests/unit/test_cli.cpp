#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctk/cli.hpp"

using namespace ctk;
namespace fs = std::filesystem;

namespace {

struct Out {
  int code;
  std::string out, err;
};

Out ctk_run(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  const int code = cli::dispatch(args, o, e);
  return {code, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ctk_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(ctk_run({}).code, 2);
  EXPECT_EQ(ctk_run({"nonsense"}).code, 2);
  EXPECT_EQ(ctk_run({"geometry", "sphere", "--d", "x"}).code, 2);
  EXPECT_EQ(ctk_run({"peierls", "constants", "--alpha", "1.5"}).code, 1);
  EXPECT_EQ(ctk_run({"entropy", "enumerate", "--m", "9"}).code, 1);
  const auto h = ctk_run({"peierls", "nu-exact", "--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("--betas"), std::string::npos);
  EXPECT_EQ(ctk_run({"--version"}).out, std::string(cli::kVersion) + "\n");
}

TEST(Cli, SphereOutput) {
  const auto r = ctk_run({"geometry", "sphere", "--d", "3", "--n", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["data"]["sphere_count"], 18);
  EXPECT_EQ(j["data"]["ball_count"], 25);
  EXPECT_EQ(j["manifest"]["command"], "geometry sphere");
  EXPECT_EQ(j["manifest"]["version"], cli::kVersion);
}

TEST(Cli, TomlSubset) {
  const auto j = cli::parse_toml(R"(# comment
title = "x"
[model]
d = 2
alpha = 2.5   # trailing
h_star = 1e-1
flag = true
[mc]
list = [1, 2,
  3.5]
name = 'lit\eral'
a.b = -4
)");
  EXPECT_EQ(j["title"], "x");
  EXPECT_EQ(j["model"]["d"], 2);
  EXPECT_DOUBLE_EQ(j["model"]["alpha"].get<double>(), 2.5);
  EXPECT_DOUBLE_EQ(j["model"]["h_star"].get<double>(), 0.1);
  EXPECT_EQ(j["model"]["flag"], true);
  EXPECT_EQ(j["mc"]["list"].size(), 3u);
  EXPECT_EQ(j["mc"]["name"], "lit\\eral");
  EXPECT_EQ(j["mc"]["a"]["b"], -4);
  EXPECT_THROW(cli::parse_toml("a = 1\na = 2\n"), cli::ConfigError);
  EXPECT_THROW(cli::parse_toml("a = \n"), cli::ConfigError);
  EXPECT_THROW(cli::parse_toml("[[t]]\n"), cli::ConfigError);
}

TEST(Cli, Sha256) {
  EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(cli::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Cli, EmptyPlotStillWritesScripts) {
  const auto prefix = scratch("empty_phase").string();
  const auto paths = cli::emit_plot_data(cli::PlotKind::PhaseDiagram, {}, prefix, nlohmann::json::object());
  ASSERT_EQ(paths.size(), 2u);
  for (const auto& p : paths) EXPECT_TRUE(fs::exists(p));
  std::ifstream gp(prefix + ".gp");
  std::stringstream ss;
  ss << gp.rdbuf();
  EXPECT_NE(ss.str().find("Uniqueness?"), std::string::npos);
}

TEST(Cli, MissingConfigIsUsageError) {
  EXPECT_EQ(ctk_run({"mc", "run", "--config", "/nonexistent/cfg.toml"}).code, 2);
  const auto bad = scratch("bad.toml");
  write(bad, "[mc]\nL = \n");
  EXPECT_EQ(ctk_run({"mc", "run", "--config", bad.string()}).code, 2);
}

TEST(Cli, ScanStrictRefusesOutsideRegimes) {
  const auto cfg = scratch("scan.toml");
  write(cfg, "[model]\nd = 2\nalpha = 2.5\nh_star = 0.5\n[mc]\nL = 4\nsweeps = 20\nburn_in = 5\n"
             "[scan]\nbetas = [0.5]\ndeltas = [0.2, 1.0]\n");
  const auto loose = ctk_run({"mc", "scan", "--config", cfg.string()});
  EXPECT_EQ(loose.code, 0) << loose.err;
  EXPECT_NE(loose.err.find("Uniqueness?"), std::string::npos);
  EXPECT_EQ(ctk_run({"mc", "scan", "--config", cfg.string(), "--strict"}).code, 1);
}

TEST(Cli, ReplayReproducesData) {
  const auto cfg = scratch("replay.toml");
  write(cfg, "[model]\nd = 2\nalpha = 2.5\nh_star = 0.2\ndelta = 1.0\nbeta = 0.4\n"
             "[mc]\nL = 4\nsweeps = 50\nburn_in = 5\nseed = 9\n[scan]\nbetas = [0.4, 0.8]\n");
  const auto csv = scratch("replay.csv");
  ASSERT_EQ(ctk_run({"mc", "scan", "--config", cfg.string(), "--out", csv.string()}).code, 0);
  const auto r = ctk_run({"replay", "--file", csv.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"identical\": true"), std::string::npos);

  const auto js = scratch("betac.json");
  ASSERT_EQ(ctk_run({"peierls", "betac", "--out", js.string()}).code, 0);
  EXPECT_EQ(ctk_run({"replay", "--file", js.string()}).code, 0);
}
