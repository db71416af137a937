#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "output.hpp"
#include "runner.hpp"

using namespace pdc::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("pdc_test_cli_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("config survives a JSON round trip") {
  ExperimentConfig c;
  c.experiment = "fig3";
  c.alpha2 = {25, 50, 64, 100};
  c.tau.max = 0.4;
  c.tau.points = 77;
  c.tau.spacing = Spacing::random;
  c.delta = 0.02;
  c.orders = {2, 3};
  c.seed = 12345;
  c.times = {0.1, 0.2};
  c.svg = true;
  const auto back = configs_from_json(to_json(c));
  REQUIRE(back.size() == 1);
  CHECK(to_json(back[0]) == to_json(c));
  CHECK(config_hash(back[0]) == config_hash(c));

  // results-affecting changes move the hash, output location does not
  ExperimentConfig d = c;
  d.delta = 0.03;
  CHECK(config_hash(d) != config_hash(c));
  ExperimentConfig e = c;
  e.out = "/somewhere/else";
  CHECK(config_hash(e) == config_hash(c));
}

TEST_CASE("config parsing rejects bad input") {
  CHECK_THROWS_AS(configs_from_json(json::parse(R"({"alpha": [1]})")), ConfigError);
  CHECK_THROWS_AS(configs_from_json(json::parse(R"({"tau": {"pts": 3}})")), ConfigError);
  CHECK_THROWS_AS(configs_from_json(json::parse(R"({"tau": {"spacing": "cubic"}})")), ConfigError);
  CHECK_THROWS_AS(configs_from_json(json::parse(R"({"alpha2": "many"})")), ConfigError);
  CHECK_THROWS_AS(configs_from_json(json::parse(R"([1, 2])")), ConfigError);
  CHECK_THROWS_AS(configs_from_json(json::parse(R"({"experiment": []})")), ConfigError);
  CHECK_THROWS_AS(load_configs("/nonexistent/config.json"), ConfigError);

  const auto many = configs_from_json(json::parse(R"({"experiment": ["fig1", "fig2"], "alpha2": [25]})"));
  REQUIRE(many.size() == 2);
  CHECK(many[0].experiment == "fig1");
  CHECK(many[1].experiment == "fig2");
  CHECK(many[1].alpha2 == std::vector<double>{25});
}

TEST_CASE("validation") {
  auto bad = [](auto edit) {
    ExperimentConfig c;
    edit(c);
    return c;
  };
  CHECK_NOTHROW(validate(ExperimentConfig{}));
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.alpha2.clear(); })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.alpha2 = {-1}; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.alpha2 = {std::nan("")}; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.alpha2 = {1e4}; })), ConfigError);
  CHECK_NOTHROW(validate(bad([](auto& c) {
    c.alpha2 = {1e4};
    c.long_running = true;
  })));
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.experiment = "fig7"; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.tau.points = 1; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.tau.max = -1.0; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.tau.spacing = Spacing::log; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.delta = 1.5; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.orders = {7}; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.rtol = 0; })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto& c) {
    c.experiment = "fig8";
    c.alpha2 = {25, 100};
  })), ConfigError);
  CHECK_THROWS_AS(validate(bad([](auto& c) {
    c.experiment = "fig10";
    c.orders = {1};
  })), ConfigError);
  CHECK_NOTHROW(validate(bad([](auto& c) {
    c.experiment = "fig10";
    c.alpha2 = {25, 50, 100, 200};
  })));
  try {
    validate(bad([](auto& c) { c.alpha2.clear(); }));
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("alpha2") != std::string::npos);
  }
  CHECK(experiment_ids().size() == 12);
}

TEST_CASE("grids are reproducible from the seed") {
  GridSpec g;
  g.points = 50;
  g.spacing = Spacing::random;
  const auto a = make_grid(g, 2.0, 7), b = make_grid(g, 2.0, 7), c = make_grid(g, 2.0, 8);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.front() == 0.0);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(a.back() <= 2.0);
  g.spacing = Spacing::linear;
  g.max = 1.0;
  CHECK(make_grid(g, 2.0, 0).back() == 1.0);
  g.spacing = Spacing::log;
  g.min = 1e-3;
  const auto lg = make_grid(g, 2.0, 0);
  CHECK(lg.front() == 1e-3);
  CHECK(lg[1] / lg[0] == doctest::Approx(lg[2] / lg[1]));
}

TEST_CASE("csv tables round trip exactly") {
  const std::vector<double> tau{0.0, 0.1, 1.0 / 3.0};
  CsvTable t(tau);
  t.add("x", {1.0, std::nan(""), -2.5e-300});
  t.add("y", {INFINITY, -INFINITY, 6.02214076e23});
  const std::string text = t.str();
  CHECK(text.rfind("tau,x,y\n", 0) == 0);
  const ParsedCsv p = parse_csv(text);
  CHECK(p.header == std::vector<std::string>{"tau", "x", "y"});
  REQUIRE(p.columns.size() == 3);
  CHECK(p.columns[0] == tau);
  CHECK(p.columns[1][0] == 1.0);
  CHECK(std::isnan(p.columns[1][1]));
  CHECK(p.columns[1][2] == -2.5e-300);
  CHECK(p.columns[2][0] == INFINITY);
  CHECK(p.columns[2][1] == -INFINITY);
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK_THROWS(CsvTable(tau).add("short", {1.0}));
  CHECK_THROWS(parse_csv("tau,x\n1,2\n3\n"));
}

TEST_CASE("svg plots draw one polyline per series") {
  CsvTable t({0.1, 1.0, 10.0});
  t.add("a", {1.0, 2.0, 3.0});
  t.add("b", {-1.0, std::nan(""), 1e-3});
  PlotOptions opt;
  opt.title = "demo <&>";
  const std::string svg = render_svg(t.str(), opt);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t lines = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++lines;
  CHECK(lines >= 2);
  CHECK(svg.find("demo <&>") == std::string::npos);
  CHECK(svg.find("demo &lt;&amp;&gt;") != std::string::npos);
  opt.log_x = opt.log_y = opt.absolute = true;
  CHECK(render_svg(t.str(), opt).find("<polyline") != std::string::npos);
}

TEST_CASE("execute writes checksummed, reproducible outputs") {
  ExperimentConfig sim;
  sim.experiment = "simulate";
  sim.alpha2 = {25};
  sim.tau.points = 40;
  sim.svg = true;
  ExperimentConfig fig2 = sim;
  fig2.experiment = "fig2";
  fig2.tau.points = 60;
  const std::vector<ExperimentConfig> configs{sim, fig2};

  std::ostringstream log;
  const fs::path first = fresh_dir("a"), second = fresh_dir("b");
  const RunReport r1 = execute(configs, first.string(), log);
  CHECK(r1.failures == 0);
  const RunReport r2 = execute(configs, second.string(), log);
  CHECK(r2.failures == 0);
  INFO(log.str());

  const json manifest = json::parse(slurp(first / "manifest.json"));
  CHECK(manifest == r1.manifest);
  CHECK(manifest["experiments"].size() == 2);
  REQUIRE(manifest["outputs"].size() > 2);
  bool saw_svg = false;
  for (const auto& o : manifest["outputs"]) {
    const std::string rel = o["file"].get<std::string>();
    INFO(rel);
    const std::string content = slurp(first / rel);
    CHECK(o["bytes"].get<std::size_t>() == content.size());
    CHECK(o["fnv1a64"].get<std::string>() == fnv1a_hex(content));
    CHECK(content == slurp(second / rel));
    saw_svg = saw_svg || rel.ends_with(".svg");
    if (rel.ends_with(".csv")) CHECK(content.rfind("tau,", 0) == 0);
  }
  CHECK(saw_svg);
  CHECK(r2.manifest["outputs"] == r1.manifest["outputs"]);

  // a config error stops everything before any output is written
  ExperimentConfig broken = sim;
  broken.alpha2.clear();
  const fs::path none = fresh_dir("c");
  CHECK_THROWS_AS(execute({sim, broken}, none.string(), log), ConfigError);
  CHECK_FALSE(fs::exists(none));

  fs::remove_all(first);
  fs::remove_all(second);
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}
