#include <cstdlib>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cavity_ising/app/commands.hpp"

using namespace cavity_ising;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::mt19937_64 rng(std::random_device{}());
    path_ = fs::temp_directory_path() / ("cavity_ising_cli_" + app::hex64(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int rc = app::run(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return rc;
}

std::string slurp(const fs::path& p) { return app::read_file(p); }

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}), app::kExitUsage);
  EXPECT_EQ(run({"no-such-command"}), app::kExitUsage);
  EXPECT_EQ(run({"landscape", "--g", "abc"}), app::kExitUsage);
  EXPECT_EQ(run({"--format", "xml", "critical-points"}), app::kExitUsage);
  TempDir t;
  EXPECT_EQ(run({"--out-dir", t.path().string(), "landscape", "--g", "-1"}), app::kExitUsage);
  EXPECT_EQ(run({"--out-dir", t.path().string(), "entanglement", "--block", "5000"}), app::kExitUsage);
  EXPECT_EQ(run({"--out-dir", t.path().string(), "meanfield"}), app::kExitUsage);
  EXPECT_EQ(run({"--jobs", "0", "critical-points"}), app::kExitUsage);
}

TEST(Cli, HelpExitsZero) {
  std::string text;
  EXPECT_EQ(run({"--help"}, &text), app::kExitOk);
  EXPECT_NE(text.find("phase-diagram"), std::string::npos);
}

TEST(Cli, VerifyHookExitCodes) {
  auto saved = app::verify_hook();
  app::verify_hook() = nullptr;
  EXPECT_EQ(run({"verify"}), app::kExitUsage);
  app::verify_hook() = [](const std::string& c, std::ostream& o) {
    o << c;
    return c == "1" ? app::kExitOk : app::kExitNumerical;
  };
  EXPECT_EQ(run({"verify", "--criteria", "1"}), app::kExitOk);
  EXPECT_EQ(run({"verify", "--criteria", "2"}), app::kExitNumerical);
  app::verify_hook() = saved;
}

TEST(Cli, CsvHeaderAndPrecision) {
  TempDir t;
  ASSERT_EQ(run({"--out-dir", t.path().string(), "landscape", "--g", "1.3", "--by", "0.4", "--alpha", "0:1:3"}), 0);
  const std::string csv = slurp(t.path() / "landscape.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha_t,h_t,energy");
  // 12 significant digits.
  const double e = model::landscape_energy(0.5, 0.4, 1.3);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", e);
  EXPECT_NE(csv.find(buf), std::string::npos);
}

TEST(Cli, JsonFormat) {
  TempDir t;
  ASSERT_EQ(run({"--format", "json", "--out-dir", t.path().string(), "landscape", "--alpha", "0:1:3"}), 0);
  const auto j = app::json::parse(slurp(t.path() / "landscape.json"));
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), 3u);
  EXPECT_TRUE(j[0].contains("energy"));
}

TEST(Cli, ManifestContents) {
  TempDir t;
  ASSERT_EQ(run({"--reproducible", "--out-dir", t.path().string(), "--jobs", "3", "finite-temp", "--beta", "5"}), 0);
  const auto m = app::json::parse(slurp(t.path() / "manifest.json"));
  EXPECT_EQ(m["command"], "finite-temp");
  EXPECT_EQ(m["duration_ms"], 0);
  EXPECT_FALSE(m.contains("timestamp"));
  EXPECT_EQ(m["parameters"]["beta"], "5");
  EXPECT_EQ(m["parameters"]["by"], "0");
  for (const auto& a : m["argv"]) {
    EXPECT_NE(a, "--out-dir");
    EXPECT_NE(a, "--jobs");
  }
  EXPECT_EQ(m["outputs"][0], "transition.json");
  const auto tr = app::json::parse(slurp(t.path() / "transition.json"));
  EXPECT_EQ(tr["order"], "first");
}

TEST(Cli, DeterministicAcrossThreadCounts) {
  TempDir a, b;
  const std::vector<std::string> cmd = {"observables", "--g", "1.38288", "--by", "0.9:1.3:9", "--chi"};
  auto with = [&](const fs::path& d, const std::string& jobs) {
    std::vector<std::string> v = {"--reproducible", "--out-dir", d.string(), "--jobs", jobs};
    v.insert(v.end(), cmd.begin(), cmd.end());
    return v;
  };
  ASSERT_EQ(run(with(a.path(), "1")), 0);
  ASSERT_EQ(run(with(b.path(), "4")), 0);
  EXPECT_EQ(slurp(a.path() / "observables.csv"), slurp(b.path() / "observables.csv"));
  EXPECT_EQ(slurp(a.path() / "manifest.json"), slurp(b.path() / "manifest.json"));
}

TEST(Cli, ReplayReproducesBytes) {
  TempDir a, b;
  ASSERT_EQ(run({"--reproducible", "--svg", "--out-dir", a.path().string(), "landau", "--c1", "0.35", "--c2", "-0.02"}),
            0);
  ASSERT_EQ(run({"--out-dir", b.path().string(), "replay", (a.path() / "manifest.json").string()}), 0);
  for (const auto& e : fs::directory_iterator(a.path())) {
    const auto name = e.path().filename();
    ASSERT_TRUE(fs::exists(b.path() / name)) << name;
    EXPECT_EQ(slurp(e.path()), slurp(b.path() / name)) << name;
  }
  EXPECT_EQ(run({"replay", (a.path() / "missing.json").string()}), app::kExitUsage);
}

TEST(Cli, SvgTimestampOnlyWhenNotReproducible) {
  TempDir a, b;
  ASSERT_EQ(run({"--svg", "--out-dir", a.path().string(), "landscape"}), 0);
  ASSERT_EQ(run({"--svg", "--reproducible", "--out-dir", b.path().string(), "landscape"}), 0);
  EXPECT_NE(slurp(a.path() / "landscape.svg").find("<!-- generated"), std::string::npos);
  EXPECT_EQ(slurp(b.path() / "landscape.svg").find("<!-- generated"), std::string::npos);
}

TEST(Cli, BoundaryCacheRoundTrip) {
  TempDir out1, out2, cache;
  const std::vector<std::string> base = {"--reproducible", "--cache-dir", cache.path().string()};
  auto cmd = [&](const fs::path& d) {
    auto v = base;
    v.insert(v.end(), {"--out-dir", d.string(), "phase-diagram", "--resolution", "16"});
    return v;
  };
  ASSERT_EQ(run(cmd(out1.path())), 0);
  int cached = 0;
  for (const auto& e : fs::directory_iterator(cache.path())) {
    EXPECT_EQ(e.path().extension(), ".csv");
    ++cached;
  }
  EXPECT_EQ(cached, 1);
  ASSERT_EQ(run(cmd(out2.path())), 0);
  EXPECT_EQ(slurp(out1.path() / "boundaries.csv"), slurp(out2.path() / "boundaries.csv"));
}

TEST(Cli, CacheEnvironmentOverride) {
  TempDir env_dir, flag_dir;
  ::setenv("CAVITY_ISING_CACHE", env_dir.path().string().c_str(), 1);
  app::BoundaryCache c(flag_dir.path().string());
  ::unsetenv("CAVITY_ISING_CACHE");
  EXPECT_EQ(c.directory(), env_dir.path().string());
  c.store("k", "x\n");
  EXPECT_EQ(c.load("k").value(), "x\n");
  EXPECT_FALSE(app::BoundaryCache("").enabled());
}

TEST(Cli, GridParsing) {
  const auto g = app::parse_grid("0:1:5");
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_EQ(app::parse_grid("0.25").size(), 1u);
  EXPECT_THROW(app::parse_grid("1:0:x"), std::invalid_argument);
  EXPECT_TRUE(std::isinf(app::parse_beta("inf")));
}

TEST(Cli, ParallelMapKeepsOrderAndRethrows) {
  const auto v = app::parallel_map<int>(100, 8, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], static_cast<int>(i * i));
  EXPECT_THROW(app::parallel_map<int>(10, 4, [](std::size_t i) -> int {
                 if (i == 7) throw std::runtime_error("x");
                 return 0;
               }),
               std::runtime_error);
}

TEST(Cli, PhaseDiagramOutputs) {
  TempDir t;
  ASSERT_EQ(run({"--reproducible", "--svg", "--out-dir", t.path().string(), "--jobs", "2", "phase-diagram",
                 "--resolution", "16", "--grid", "4x4"}),
            0);
  for (const char* f : {"boundaries.csv", "grid.csv", "critical_points.json", "phase_diagram.svg", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(t.path() / f)) << f;
  }
  const auto cp = app::json::parse(slurp(t.path() / "critical_points.json"));
  EXPECT_EQ(cp["A_reference_1.45249"]["matches"], "h0");
  const std::string svg = slurp(t.path() / "phase_diagram.svg");
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
}

TEST(Cli, MeanFieldDiagramNeedsNoCoupling) {
  TempDir t;
  ASSERT_EQ(run({"--out-dir", t.path().string(), "meanfield", "--diagram", "--resolution", "16"}), 0);
  EXPECT_TRUE(fs::exists(t.path() / "meanfield_boundaries.csv"));
  EXPECT_TRUE(fs::exists(t.path() / "meanfield_junction.json"));
  EXPECT_FALSE(fs::exists(t.path() / "meanfield_point.json"));
}
