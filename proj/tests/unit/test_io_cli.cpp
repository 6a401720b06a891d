#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "fracberno/error.hpp"
#include "fracberno/io.hpp"
#include "verify/suite.hpp"

using namespace fracberno;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fracberno_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fracberno");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string field_of(const std::string& text) {
  try {
    cli::parse_config_text(text);
  } catch (const cli::ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(Io, NumberFormat) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  EXPECT_EQ(round12(1.0 / 3.0), 0.333333333333);
}

TEST(Io, DomainRoundTrip) {
  const std::vector<DomainSpec> domains{
      DomainSpec::ball({0.25, -1}, 0.5), DomainSpec::ball({0.5, 0}, 2.0, 1), DomainSpec::box({0, 0}, {2, 1}),
      DomainSpec::polygon({{0, 0}, {1, 0}, {0, 1}}), DomainSpec::star({0, 0}, {0.5, 0.6, 0.7, 0.6})};
  for (const DomainSpec& d : domains) {
    const DomainSpec back = parse_domain(domain_to_json(d));
    EXPECT_EQ(back.kind(), d.kind());
    EXPECT_EQ(back.dim(), d.dim());
    EXPECT_NEAR(back.measure(), d.measure(), 1e-12);
    EXPECT_EQ(domain_to_json(back), domain_to_json(d));
  }
}

TEST(Io, DomainErrorsNameTheField) {
  auto message = [](const std::string& text) {
    try {
      parse_domain(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), "invalid domain");
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"kind":"ball","center":[0,0]})").find("radius"), std::string::npos);
  EXPECT_NE(message(R"({"kind":"ball","center":[0,0],"radius":1,"color":2})").find("color"), std::string::npos);
  EXPECT_NE(message(R"({"kind":"blob"})").find("kind"), std::string::npos);
  EXPECT_NE(message(R"({"kind":"polygon","vertices":[[0,0],[1,0],[1]]})").find("vertices[2]"), std::string::npos);
  EXPECT_NE(message("{not json").find("malformed"), std::string::npos);
}

TEST(Io, GridFunctionRoundTrip) {
  const fs::path dir = scratch("grid");
  const Grid g = Grid::make(2, {-1, 0}, {1, 0.5}, 0.25);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.1 * i - 0.7;
  write_grid_function(dir / "u.csv", g, v);
  const auto [g2, v2] = read_grid_function(dir / "u.csv");
  EXPECT_EQ(g2, g);
  ASSERT_EQ(v2.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v2[i], v[i], 1e-11);
  try {
    read_text(dir / "missing.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "io");
  }
}

TEST(Config, DefaultsAndEcho) {
  const cli::RunConfig c = cli::parse_config_text(
      R"({"problem":"exterior","K":{"kind":"ball","center":[0,0],"radius":0.5},"lambda":2,"h":0.03125})");
  EXPECT_EQ(c.problem, "exterior");
  EXPECT_DOUBLE_EQ(c.tau, 0.01);
  EXPECT_EQ(c.relaxed.eps_schedule, (std::vector<double>{0.2, 0.1, 0.05, 0.02, 0.01}));
  EXPECT_FALSE(c.box.has_value());
  const Box b = cli::exterior_box(c);
  EXPECT_NEAR((b.hi.x - b.lo.x) / c.h, 160.0, 1e-9);
  EXPECT_NEAR(b.lo.x + b.hi.x, 0.0, 1e-12);
  const nlohmann::json echo = c.to_json();
  EXPECT_EQ(echo["lambda"], 2.0);
  EXPECT_TRUE(echo.contains("tau"));
}

TEST(Config, Errors) {
  const std::string K = R"("K":{"kind":"ball","center":[0,0],"radius":0.5})";
  EXPECT_EQ(field_of(R"({"problem":"exterior",)" + K + R"(,"lambda":-1,"h":0.1})"), "lambda");
  EXPECT_EQ(field_of(R"({"problem":"exterior",)" + K + R"(,"h":0.1})"), "lambda");
  EXPECT_EQ(field_of(R"({"problem":"exterior",)" + K + R"(,"lambda":1,"h":0.1,"speed":3})"), "speed");
  EXPECT_EQ(field_of(R"({"problem":"exterior",)" + K +
                     R"(,"lambda":1,"h":0.3,"box":{"lo":[-1,-1],"hi":[1,1]}})"),
            "h");
  EXPECT_EQ(field_of(R"({"problem":"sideways"})"), "problem");
  EXPECT_EQ(field_of(R"({"problem":"interior","D":{"kind":"ball","center":[0,0],"radius":1},"lambda":1,"h":0.1,"tau":0.1})"),
            "tau");
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  EXPECT_EQ(run_cli({"verify", "--suite", "nonsense", "--out", dir.string()}), 2);
  EXPECT_EQ(run_cli({"bm-verify", "--d0", (dir / "nope.json").string(), "--d1", (dir / "nope.json").string(),
                     "--s", "0.5", "--h", "0.0625", "--out", dir.string()}),
            3);
  EXPECT_EQ(run_cli({"constants", "--d", "0"}), 2);
  EXPECT_EQ(run_cli({"frobnicate"}), 2);
  EXPECT_EQ(run_cli({"constants", "--d", "2"}), 0);

  write_text(dir / "bad.json", R"({"problem":"exterior","K":{"kind":"ball","center":[0,0],"radius":0.5},"lambda":-2,"h":0.1})");
  EXPECT_EQ(run_cli({"solve-exterior", "--config", (dir / "bad.json").string(), "--out", dir.string()}), 2);
}

TEST(Cli, SolveExteriorWritesArtifacts) {
  const fs::path dir = scratch("ext");
  write_text(dir / "cfg.json",
             R"({"problem":"exterior","K":{"kind":"ball","center":[0,0],"radius":0.5},"lambda":2,"h":0.0625,)"
             R"("box":{"lo":[-1.5,-1.5],"hi":[1.5,1.5]}})");
  ASSERT_EQ(run_cli({"solve-exterior", "--config", (dir / "cfg.json").string(), "--out", dir.string()}), 0);
  for (const char* f : {"u.csv", "omega.csv", "boundary.csv", "report.json"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
  const auto report = nlohmann::json::parse(read_text(dir / "report.json"));
  EXPECT_TRUE(report.contains("config"));
  const auto [g, u] = read_grid_function(dir / "u.csv");
  EXPECT_EQ(g.nx, 48);
  for (double x : u) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
}

TEST(Suite, Registry) {
  EXPECT_EQ(verify::criteria().size(), 12u);
  EXPECT_EQ(verify::suite_members("all").size(), 12u);
  EXPECT_EQ(verify::suite_members("spectral"), (std::vector<int>{7, 8, 9}));
  EXPECT_THROW(verify::suite_members("nonsense"), std::invalid_argument);
  const auto r = verify::run_criterion(1, {});
  EXPECT_TRUE(r.passed) << r.summary;
  EXPECT_EQ(verify::result_line(r).rfind("[PASS] 1 ", 0), 0u);
}
