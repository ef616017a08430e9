#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/config_file.hpp"
#include "cli/csv.hpp"
#include "cli/svg.hpp"
#include "generators.hpp"

namespace fs = std::filesystem;
using namespace ebpois::cli;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"ebpois"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ebpois_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("CSV round trip is bit exact") {
  gen::Gen g(99);
  CurveSet set;
  for (int c = 0; c < 3; ++c) {
    Curve curve{"curve " + std::to_string(c), {}};
    double x = g.uniform(1e-3, 1e-2);
    for (int i = 0; i < 50; ++i) {
      x *= 1.0 + g.uniform(1e-9, 0.5);
      const double v = g.coin() ? g.uniform(-1, 1) * std::pow(10.0, g.integer(-300, 300)) : g.uniform(-1, 1);
      curve.points.push_back({x, v, g.log_uniform(1e-300, 1.0)});
    }
    set.curves.push_back(curve);
  }
  set.curves[0].points[0].value = std::numeric_limits<double>::denorm_min();
  set.curves[0].points[1].value = -0.0;

  std::stringstream buf;
  write_csv(buf, set);
  CHECK(buf.str().rfind("curve,mu,value,err_bound\n", 0) == 0);
  const CurveSet back = read_csv(buf);
  CHECK(back.x_name == "mu");
  REQUIRE(back.curves.size() == set.curves.size());
  for (std::size_t c = 0; c < set.curves.size(); ++c) {
    CHECK(back.curves[c].label == set.curves[c].label);
    REQUIRE(back.curves[c].points.size() == set.curves[c].points.size());
    for (std::size_t i = 0; i < set.curves[c].points.size(); ++i) {
      const CurvePoint& a = set.curves[c].points[i];
      const CurvePoint& b = back.curves[c].points[i];
      CHECK(std::memcmp(&a.x, &b.x, sizeof(double)) == 0);
      CHECK(std::memcmp(&a.value, &b.value, sizeof(double)) == 0);
      CHECK(std::memcmp(&a.err_bound, &b.err_bound, sizeof(double)) == 0);
    }
  }

  std::istringstream broken("curve,mu,value,err_bound\nx,1,notanumber,0\n");
  CHECK_THROWS(read_csv(broken));
}

TEST_CASE("config file parsing") {
  const ConfigEntries e = parse_config_text("# comment\n\n--d = 3\nr=2\n  s = 0.5  \nd=4\nstrict = true\n");
  REQUIRE(e.size() == 4);
  CHECK(e[0] == std::pair<std::string, std::string>{"r", "2"});
  CHECK(e[1] == std::pair<std::string, std::string>{"s", "0.5"});
  CHECK(e[2] == std::pair<std::string, std::string>{"d", "4"});
  CHECK(e[3] == std::pair<std::string, std::string>{"strict", "true"});
  CHECK_THROWS_AS(parse_config_text("no equals sign here\n"), ConfigFileError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/ebpois.cfg"), ConfigFileError);
}

TEST_CASE("curve specs") {
  CHECK(parse_curve_spec("eb").kind == CurveSpec::Kind::EbDiff);
  CHECK_FALSE(parse_curve_spec("eb").b.has_value());
  CHECK(*parse_curve_spec("eb:0.5").b == 0.5);
  CHECK(parse_curve_spec("shrinkage").kind == CurveSpec::Kind::ShrinkageDiff);
  CHECK(parse_curve_spec("jeffreys-risk").kind == CurveSpec::Kind::JeffreysRisk);
  CHECK(*parse_curve_spec("eb-risk:1").b == 1.0);
  CHECK_THROWS(parse_curve_spec("bogus"));
  CHECK_THROWS(parse_curve_spec("eb:-1"));
}

TEST_CASE("predict prints the Jeffreys table") {
  const Outcome o = run_cli({"predict", "--d", "1", "--r", "1", "--s", "1", "--x", "0", "--family", "jeffreys",
                             "--mass", "0.9"});
  CHECK(o.code == kExitOk);
  CHECK(o.out.find("\n(0)  0.70710678") != std::string::npos);

  const Outcome gamma = run_cli({"predict", "--d", "2", "--x", "1,3", "--family", "gamma", "--alpha", "0",
                                 "--format", "csv", "--mass", "0.99"});
  const Outcome jeff = run_cli({"predict", "--d", "2", "--x", "1,3", "--family", "jeffreys", "--format", "csv",
                                "--mass", "0.99"});
  CHECK(gamma.code == kExitOk);
  CHECK(gamma.out == jeff.out);
}

TEST_CASE("predict with the natural moment rule reports b") {
  const Outcome o = run_cli({"predict", "--d", "3", "--x", "0,1,0", "--family", "eb", "--rule", "moment", "--b",
                             "auto", "--format", "json"});
  CHECK(o.code == kExitOk);
  CHECK(o.err.find("b = 0.5") != std::string::npos);
  const auto doc = nlohmann::json::parse(o.out);
  CHECK(doc["alpha"].get<double>() == doctest::Approx(0.25));
  CHECK(doc["mass"].get<double>() >= 0.999);
}

TEST_CASE("MLE with no counts falls back, or fails under --strict") {
  const Outcome soft = run_cli({"predict", "--d", "3", "--x", "0,0,0", "--family", "eb", "--rule", "mle"});
  CHECK(soft.code == kExitOk);
  CHECK(soft.err.find("warning") != std::string::npos);
  const Outcome strict =
      run_cli({"predict", "--d", "3", "--x", "0,0,0", "--family", "eb", "--rule", "mle", "--strict"});
  CHECK(strict.code == kExitNumerical);
}

TEST_CASE("usage errors exit with status 1") {
  CHECK(run_cli({}).code == kExitUsage);
  CHECK(run_cli({"--help"}).code == kExitOk);
  CHECK(run_cli({"predict", "--d", "2", "--x", "1"}).code == kExitUsage);
  CHECK(run_cli({"predict", "--d", "1", "--x", "1", "--family", "shrinkage"}).code == kExitUsage);
  CHECK(run_cli({"predict", "--x", "1", "--family", "nonsense"}).code == kExitUsage);
  CHECK(run_cli({"risk-curve", "--mu-min", "5", "--mu-max", "1"}).code == kExitUsage);
  CHECK(run_cli({"risk-curve", "--mu-points", "0"}).code == kExitUsage);
  CHECK(run_cli({"verify", "--only", "nonsense"}).code == kExitUsage);
  CHECK(run_cli({"--config", "/nonexistent/cfg", "predict", "--x", "0"}).code == kExitUsage);
}

TEST_CASE("config files fill in flags and explicit flags win") {
  const fs::path dir = scratch_dir("config");
  {
    std::ofstream(dir / "run.cfg") << "# defaults\nd = 2\nr = 1\ns = 1\nfamily = jeffreys\nmass = 0.5\n";
  }
  const Outcome from_file = run_cli({"--config", (dir / "run.cfg").string(), "predict", "--x", "0,0"});
  CHECK(from_file.code == kExitOk);
  CHECK(from_file.out.find("family jeffreys") != std::string::npos);

  const Outcome overridden =
      run_cli({"--config", (dir / "run.cfg").string(), "predict", "--x", "0,0", "--family", "gamma"});
  CHECK(overridden.code == kExitOk);
  CHECK(overridden.out.find("family gamma") != std::string::npos);

  const Outcome wrong_d = run_cli({"--config", (dir / "run.cfg").string(), "predict", "--x", "0,0,0"});
  CHECK(wrong_d.code == kExitUsage);
  const Outcome fixed_d = run_cli({"--config", (dir / "run.cfg").string(), "--d", "3", "predict", "--x", "0,0,0"});
  CHECK(fixed_d.code == kExitOk);

  {
    std::ofstream(dir / "bad.cfg") << "not_a_flag = 1\n";
  }
  CHECK(run_cli({"--config", (dir / "bad.cfg").string(), "predict", "--x", "0"}).code == kExitUsage);
  fs::remove_all(dir);
}

TEST_CASE("risk curves: identical flags give identical bytes, and d = 2 shrinkage vanishes") {
  const Outcome a = run_cli({"--d", "3", "risk-curve", "--curves", "eb:0.5,shrinkage", "--mu-points", "8"});
  const Outcome b = run_cli({"--d", "3", "risk-curve", "--curves", "eb:0.5,shrinkage", "--mu-points", "8",
                             "--threads", "1"});
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  std::istringstream in(a.out);
  const CurveSet set = read_csv(in);
  REQUIRE(set.curves.size() == 2);
  for (const Curve& c : set.curves) {
    CHECK(c.points.size() == 8);
    for (std::size_t i = 1; i < c.points.size(); ++i) CHECK(c.points[i].x > c.points[i - 1].x);
    for (const CurvePoint& p : c.points) {
      CHECK(p.value > 0.0);
      CHECK(p.err_bound >= 0.0);
    }
  }

  const Outcome flat = run_cli({"--d", "2", "risk-curve", "--curves", "shrinkage", "--mu-points", "6"});
  std::istringstream flat_in(flat.out);
  const CurveSet flat_set = read_csv(flat_in);
  REQUIRE(flat_set.curves.size() == 1);
  for (const CurvePoint& p : flat_set.curves[0].points) CHECK(p.value == 0.0);
}

TEST_CASE("plots are well-formed SVG") {
  const fs::path dir = scratch_dir("plot");
  const Outcome o = run_cli({"--d", "3", "--out-dir", dir.string(), "risk-curve", "--curves", "eb:0.5,eb:1",
                             "--mu-points", "6", "--plot", "--log-y", "--name", "demo"});
  REQUIRE(o.code == kExitOk);
  const std::string svg = slurp(dir / "demo.svg");
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  std::size_t opens = 0, closes = 0;
  for (std::size_t p = 0; (p = svg.find("<g", p)) != std::string::npos; ++p) opens += svg[p + 2] == '>' || svg[p + 2] == ' ';
  for (std::size_t p = 0; (p = svg.find("</g>", p)) != std::string::npos; ++p) ++closes;
  CHECK(opens == closes);
  CHECK(fs::exists(dir / "demo.csv"));
  fs::remove_all(dir);

  SvgOptions opt;
  opt.title = "a < b & c";
  CurveSet set;
  set.curves.push_back({"x<y", {{1, 1, 0}, {2, 4, 0}}});
  const std::string escaped = render_svg(set, opt);
  CHECK(escaped.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(escaped.find("x&lt;y") != std::string::npos);
}

TEST_CASE("verify writes reports, filters families and is byte reproducible") {
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  const fs::path one = scratch_dir("verify1"), two = scratch_dir("verify2");
  const Outcome a = run_cli({"--out-dir", one.string(), "--seed", "7", "verify", "--only", "lemma2", "--samples",
                             "3000"});
  const Outcome b = run_cli({"--out-dir", two.string(), "--seed", "7", "verify", "--only", "lemma2", "--samples",
                             "3000", "--threads", "2"});
  CHECK(a.code == kExitOk);
  CHECK(b.code == kExitOk);
  const std::string ja = slurp(one / "verification.json"), jb = slurp(two / "verification.json");
  CHECK(ja == jb);
  CHECK(slurp(one / "verification.txt") == slurp(two / "verification.txt"));
  const auto doc = nlohmann::json::parse(ja);
  REQUIRE(doc["checks"].size() == 1);
  CHECK(doc["checks"][0]["family"] == "lemma2");
  CHECK(doc["timestamp"] == "2023-11-14T22:13:20Z");
  unsetenv("SOURCE_DATE_EPOCH");
  fs::remove_all(one);
  fs::remove_all(two);
}

TEST_CASE("unwritable output directories are usage errors") {
  const fs::path dir = scratch_dir("blocked");
  { std::ofstream(dir / "file") << "x"; }
  const Outcome o = run_cli({"--out-dir", (dir / "file" / "sub").string(), "figures", "--only", "fig3"});
  CHECK(o.code == kExitUsage);
  fs::remove_all(dir);
}

TEST_CASE("figures: fig3 dips near -0.011 around lambda = 5") {
  const fs::path dir = scratch_dir("figures");
  const Outcome o = run_cli({"--out-dir", dir.string(), "figures", "--only", "fig3", "--no-plot"});
  REQUIRE(o.code == kExitOk);
  CHECK_FALSE(fs::exists(dir / "fig3.svg"));
  std::ifstream in(dir / "fig3.csv");
  const CurveSet set = read_csv(in);
  CHECK(set.x_name == "lambda");
  const Curve& f = set.curves.at(0);
  CHECK(f.points.size() == 2000);
  const CurvePoint* low = &f.points[0];
  for (const CurvePoint& p : f.points)
    if (p.value < low->value) low = &p;
  CHECK(low->x >= 4.5);
  CHECK(low->x <= 5.5);
  CHECK(low->value == doctest::Approx(-0.011).epsilon(0.05));
  fs::remove_all(dir);
}
