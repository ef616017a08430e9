#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/config_file.hpp"
#include "cli/svg.hpp"
#include "ebpois/errors.hpp"
#include "ebpois/hyper.hpp"
#include "ebpois/parallel.hpp"
#include "ebpois/predictive.hpp"
#include "ebpois/risk.hpp"
#include "ebpois/verify.hpp"

namespace fs = std::filesystem;

namespace ebpois::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  double r = 1.0;
  double s = 1.0;
  int d = 3;
  unsigned threads = 0;
  double tol = 1e-12;
  std::uint64_t seed = 42;
  std::string out_dir;
  std::string format = "table";
  std::string config;

  ModelConfig model() const {
    ModelConfig cfg{d, r, s};
    cfg.validate();
    return cfg;
  }
  SeriesPolicy series() const {
    SeriesPolicy p = SeriesPolicy{}.with_tol(tol);
    p.validate();
    return p;
  }
  fs::path out_path(const char* fallback) const { return out_dir.empty() ? fs::path(fallback) : fs::path(out_dir); }
};

struct GridOptions {
  double mu_min = 0.05;
  double mu_max = 50.0;
  int mu_points = 60;

  Eigen::VectorXd grid() const {
    if (!(mu_min > 0.0) || !(mu_max > mu_min) || mu_points < 2) {
      throw UsageError("invalid mu grid: need 0 < mu-min < mu-max and mu-points >= 2");
    }
    return log_grid(mu_min, mu_max, mu_points);
  }
};

struct PredictOptions {
  std::string x;
  std::string family = "jeffreys";
  double alpha = 1.0;
  std::string rule = "moment";
  std::string b = "auto";
  double mass = 0.999;
  bool strict = false;
  std::int64_t max_entries = 2'000'000;
};

struct RiskCurveOptions {
  std::vector<std::string> curves{"eb"};
  GridOptions grid;
  bool log_values = false;
  bool log_y = false;
  bool plot = false;
  std::string name = "risk_curve";
};

struct FiguresOptions {
  std::vector<std::string> only;
  std::vector<int> fig1_d{3, 4, 6, 8};
  GridOptions grid;
  bool no_plot = false;
};

struct VerifyOptions {
  double samples = 1e5;
  std::vector<std::string> only;
};

struct Options {
  GlobalOptions global;
  PredictOptions predict;
  RiskCurveOptions risk_curve;
  FiguresOptions figures;
  VerifyOptions verify;
};

void add_grid_options(CLI::App* sub, GridOptions& g) {
  sub->add_option("--mu-min", g.mu_min, "Smallest mu of the log-spaced grid")->capture_default_str();
  sub->add_option("--mu-max", g.mu_max, "Largest mu of the log-spaced grid")->capture_default_str();
  sub->add_option("--mu-points", g.mu_points, "Number of grid points")->capture_default_str();
}

void build_app(CLI::App& app, Options& o) {
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", EBPOIS_VERSION);

  GlobalOptions& g = o.global;
  app.add_option("--r", g.r, "Observation time of x")->capture_default_str();
  app.add_option("--s", g.s, "Observation time of y")->capture_default_str();
  app.add_option("--d", g.d, "Number of Poisson coordinates")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--tol", g.tol, "Tail tolerance of every Poisson series")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for random verification samples")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for output files");
  app.add_option("--format", g.format, "Output format for predict and verify")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--config", g.config, "Flat key = value file; explicit flags win");

  PredictOptions& p = o.predict;
  CLI::App* predict = app.add_subcommand("predict", "Predictive pmf table for observed counts x");
  predict->add_option("--x", p.x, "Observed counts, comma separated (length d)")->required();
  predict->add_option("--family", p.family, "jeffreys, gamma, eb or shrinkage")
      ->check(CLI::IsMember({"jeffreys", "gamma", "eb", "shrinkage"}))
      ->capture_default_str();
  predict->add_option("--alpha", p.alpha, "Prior rate for --family gamma")->capture_default_str();
  predict->add_option("--rule", p.rule, "Hyperparameter rule for --family eb: moment, mle, ure")
      ->check(CLI::IsMember({"moment", "mle", "ure"}))
      ->capture_default_str();
  predict->add_option("--b", p.b, "Moment-rule b, or 'auto' for d/2 - 1")->capture_default_str();
  predict->add_option("--mass", p.mass, "Stop once the table holds this much probability")
      ->capture_default_str();
  predict->add_option("--max-entries", p.max_entries, "Cap on table rows")->capture_default_str();
  predict->add_flag("--strict", p.strict, "Fail instead of falling back when MLE/URE is undefined");

  RiskCurveOptions& rc = o.risk_curve;
  CLI::App* curve = app.add_subcommand("risk-curve", "Risk differences or risks over a mu grid");
  curve->add_option("--curves", rc.curves,
                    "Comma-separated: eb[:b], shrinkage, jeffreys-risk, eb-risk[:b]")
      ->delimiter(',')
      ->capture_default_str();
  add_grid_options(curve, rc.grid);
  curve->add_flag("--log-values", rc.log_values, "Report ln(value) instead of value");
  curve->add_flag("--log-y", rc.log_y, "Logarithmic y axis in the SVG");
  curve->add_flag("--plot", rc.plot, "Also write an SVG chart");
  curve->add_option("--name", rc.name, "Base name of the output files")->capture_default_str();

  FiguresOptions& fo = o.figures;
  CLI::App* figures = app.add_subcommand("figures", "Write the fig1, fig2a, fig2b and fig3 data and charts");
  figures->add_option("--only", fo.only, "Subset of fig1, fig2a, fig2b, fig3")
      ->delimiter(',')
      ->check(CLI::IsMember({"fig1", "fig2a", "fig2b", "fig3"}));
  figures->add_option("--fig1-d", fo.fig1_d, "Dimensions drawn in fig1")
      ->delimiter(',')
      ->capture_default_str();
  add_grid_options(figures, fo.grid);
  figures->add_flag("--no-plot", fo.no_plot, "CSV only");

  VerifyOptions& vo = o.verify;
  CLI::App* verify = app.add_subcommand("verify", "Run the numerical verification suite");
  verify->add_option("--samples", vo.samples, "Random samples per inequality")->capture_default_str();
  verify->add_option("--only", vo.only, "Comma-separated check families")->delimiter(',');
}

// ---- helpers ----------------------------------------------------------------

CountVector parse_counts(const std::string& text) {
  std::vector<std::int64_t> values;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    std::string_view cell = rest.substr(0, comma);
    while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
    while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
    std::int64_t v = 0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc{} || end != cell.data() + cell.size()) {
      throw UsageError("--x: '" + std::string(cell) + "' is not an integer count");
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  CountVector out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) out(static_cast<Eigen::Index>(i)) = values[i];
  return out;
}

std::string short_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << content;
  if (!f) throw UsageError("failed writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory " + dir.string());
}

// Positive b for the moment rule; d/2 - 1 vanishes or goes negative for d <= 2.
double positive_b(double b) { return std::max(b, std::numeric_limits<double>::denorm_min()); }

// ---- predict ----------------------------------------------------------------

int cmd_predict(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelConfig cfg = o.global.model();
  const PredictOptions& p = o.predict;
  if (!(p.mass > 0.0 && p.mass < 1.0)) throw UsageError("--mass must lie in (0, 1)");
  const Counts x(parse_counts(p.x));
  x.require_dim(cfg, "--x");

  PredictiveFamily family = Jeffreys{};
  if (p.family == "gamma") {
    family = FixedGamma{p.alpha};
  } else if (p.family == "shrinkage") {
    family = Shrinkage{};
  } else if (p.family == "eb") {
    auto moment_b = [&] {
      if (p.b == "auto") {
        const double b = positive_b(natural_moment_b(cfg.d));
        err << "note: moment rule b = " << short_num(b) << " (d/2 - 1)\n";
        return b;
      }
      try {
        std::size_t used = 0;
        const double b = std::stod(p.b, &used);
        if (used == p.b.size()) return b;
      } catch (const std::logic_error&) {
      }
      throw UsageError("--b must be a number or 'auto'");
    };
    auto choose_rule = [&]() -> HyperRule {
      if (p.rule == "moment") return MomentRule{moment_b()};
      if (x.sum() != 0) return p.rule == "mle" ? HyperRule{MleRule{}} : HyperRule{UreRule{}};
      if (p.strict) {
        throw UndefinedEstimatorError("the " + p.rule + " estimate of alpha is undefined when sum x = 0");
      }
      const double fallback = positive_b(natural_moment_b(cfg.d));
      err << "warning: the " << p.rule << " estimate of alpha is undefined when sum x = 0; "
          << "falling back to the moment rule with b = " << short_num(fallback) << "\n";
      return MomentRule{fallback};
    };
    const HyperRule rule = choose_rule();
    family = EmpiricalBayes{rule};
  }

  const PmfTable table = pred_pmf_table(x, family, cfg, 1.0 - p.mass, p.max_entries);
  if (const auto* eb = std::get_if<EmpiricalBayes>(&family)) {
    if (const auto* m = std::get_if<MomentRule>(&eb->rule); m && table.outside_dominance_range) {
      err << "warning: b = " << short_num(m->b)
          << " is outside 0 < b <= d - 2; no dominance over the Jeffreys predictive is guaranteed\n";
    }
  }

  const std::string fam = to_string(family);
  if (o.global.format == "json") {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const PmfEntry& e : table.entries) {
      rows.push_back({{"y", std::vector<std::int64_t>(e.y.data(), e.y.data() + e.y.size())},
                      {"probability", e.probability}});
    }
    nlohmann::ordered_json doc{{"family", fam},
                               {"d", cfg.d},
                               {"r", cfg.r},
                               {"s", cfg.s},
                               {"x", std::vector<std::int64_t>(x.values().data(), x.values().data() + x.size())},
                               {"alpha", table.alpha},
                               {"mass", table.mass},
                               {"entries", rows}};
    out << doc.dump(2) << "\n";
  } else if (o.global.format == "csv") {
    for (int i = 0; i < cfg.d; ++i) out << "y" << i + 1 << ",";
    out << "probability\n";
    for (const PmfEntry& e : table.entries) {
      for (int i = 0; i < cfg.d; ++i) out << e.y(i) << ",";
      out << format_double(e.probability) << "\n";
    }
  } else {
    out << "# family " << fam << ", alpha " << short_num(table.alpha) << ", mass "
        << short_num(table.mass) << ", " << table.entries.size() << " rows\n";
    char buf[64];
    for (const PmfEntry& e : table.entries) {
      std::string y = "(";
      for (int i = 0; i < cfg.d; ++i) y += (i ? "," : "") + std::to_string(e.y(i));
      y += ")";
      std::snprintf(buf, sizeof buf, "%.10f", e.probability);
      out << y << "  " << buf << "\n";
    }
  }
  return kExitOk;
}

// ---- risk-curve and figures -------------------------------------------------

void emit_curves(const CurveSet& set, const fs::path& dir, const std::string& name, bool plot,
                 const SvgOptions& svg, std::ostream& out) {
  ensure_dir(dir);
  std::ostringstream csv;
  write_csv(csv, set);
  write_file(dir / (name + ".csv"), csv.str());
  out << "wrote " << (dir / (name + ".csv")).string() << "\n";
  if (plot) {
    write_file(dir / (name + ".svg"), render_svg(set, svg));
    out << "wrote " << (dir / (name + ".svg")).string() << "\n";
  }
}

int cmd_risk_curve(const Options& o, const bool out_dir_given, std::ostream& out) {
  const ModelConfig cfg = o.global.model();
  const RiskCurveOptions& rc = o.risk_curve;
  const Eigen::VectorXd grid = rc.grid.grid();
  std::vector<CurveSpec> specs;
  for (const std::string& c : rc.curves) specs.push_back(parse_curve_spec(c));
  if (specs.empty()) throw UsageError("--curves is empty");

  const CurveSet set = compute_curves(specs, cfg, grid, rc.log_values, o.global.series(), o.global.threads);
  if (!out_dir_given && !rc.plot) {
    write_csv(out, set);
    return kExitOk;
  }
  SvgOptions svg;
  svg.title = std::string(rc.log_values ? "Log risk" : "Risk") + " curves, d = " + std::to_string(cfg.d);
  svg.y_label = rc.log_values ? "log value" : "value";
  svg.log_x = true;
  svg.log_y = rc.log_y;
  emit_curves(set, o.global.out_path("."), rc.name, rc.plot, svg, out);
  return kExitOk;
}

int cmd_figures(const Options& o, std::ostream& out) {
  const FiguresOptions& fo = o.figures;
  const SeriesPolicy policy = o.global.series();
  const unsigned th = o.global.threads;
  const fs::path dir = o.global.out_path(".");
  const Eigen::VectorXd grid = fo.grid.grid();
  auto wanted = [&](const char* f) {
    return fo.only.empty() || std::find(fo.only.begin(), fo.only.end(), f) != fo.only.end();
  };
  const bool plot = !fo.no_plot;

  if (wanted("fig1")) {
    CurveSet set;
    for (int d : fo.fig1_d) {
      if (d < 3) throw UsageError("--fig1-d: dimensions must be at least 3");
      const ModelConfig cfg{d, 1.0, 1.0};
      CurveSet one = compute_curves({CurveSpec{}}, cfg, grid, false, policy, th);
      one.curves.front().label = "d=" + std::to_string(d);
      set.curves.push_back(std::move(one.curves.front()));
    }
    SvgOptions svg;
    svg.title = "Risk difference p_J - p_alpha, b = d/2 - 1, r = s = 1";
    svg.y_label = "risk difference (nats)";
    svg.log_x = true;
    emit_curves(set, dir, "fig1", plot, svg, out);
  }
  struct Panel {
    const char* name;
    int d;
    double b1, b2;
  };
  for (const Panel& panel : {Panel{"fig2a", 3, 0.5, 1.0}, Panel{"fig2b", 8, 3.0, 6.0}}) {
    if (!wanted(panel.name)) continue;
    const ModelConfig cfg{panel.d, 1.0, 1.0};
    const std::vector<CurveSpec> specs{{CurveSpec::Kind::EbDiff, panel.b1},
                                       {CurveSpec::Kind::EbDiff, panel.b2},
                                       {CurveSpec::Kind::ShrinkageDiff, std::nullopt}};
    const CurveSet set = compute_curves(specs, cfg, grid, true, policy, th);
    SvgOptions svg;
    svg.title = "Log risk differences against p_J, d = " + std::to_string(panel.d) + ", r = s = 1";
    svg.y_label = "log risk difference";
    svg.log_x = true;
    emit_curves(set, dir, panel.name, plot, svg, out);
  }
  if (wanted("fig3")) {
    SvgOptions svg;
    svg.title = "f(lambda) = lambda E[log((x + 0.5)/lambda)]";
    svg.x_label = "lambda";
    svg.y_label = "f";
    emit_curves(f_curve(policy, th), dir, "fig3", plot, svg, out);
  }
  return kExitOk;
}

// ---- verify -----------------------------------------------------------------

int cmd_verify(const Options& o, std::ostream& out) {
  const VerifyOptions& vo = o.verify;
  if (!(vo.samples >= 1.0) || vo.samples != std::floor(vo.samples) || vo.samples > 1e9) {
    throw UsageError("--samples must be a whole number between 1 and 1e9");
  }
  VerifyConfig vc;
  vc.seed = o.global.seed;
  vc.samples = static_cast<std::int64_t>(vo.samples);
  vc.only = vo.only;
  vc.threads = o.global.threads;
  vc.series = o.global.series();
  const auto& families = check_families();
  for (const std::string& f : vc.only) {
    if (std::find(families.begin(), families.end(), f) == families.end()) {
      throw UsageError("--only: unknown check family '" + f + "'");
    }
  }

  const VerificationReport report = run_all(vc);
  const fs::path dir = o.global.out_path(".");
  ensure_dir(dir);
  const std::string json = report_json(report);
  const std::string text = report_text(report);
  write_file(dir / "verification.json", json);
  write_file(dir / "verification.txt", text);
  out << (o.global.format == "json" ? json : text);
  return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

// ---- config file merge ------------------------------------------------------

CLI::Option* find_option(CLI::App& app, CLI::App* sub, const std::string& key) {
  const std::string flag = "--" + key;
  if (sub) {
    if (CLI::Option* opt = sub->get_option_no_throw(flag)) return opt;
  }
  return app.get_option_no_throw(flag);
}

bool known_elsewhere(CLI::App& app, const std::string& key) {
  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) {
    if (sub->get_option_no_throw("--" + key)) return true;
  }
  return false;
}

}  // namespace

// ---- public pieces ----------------------------------------------------------

std::string CurveSpec::label(int d) const {
  const double bb = b.value_or(natural_moment_b(d));
  switch (kind) {
    case Kind::EbDiff: return "eb(b=" + short_num(bb) + ")";
    case Kind::ShrinkageDiff: return "shrinkage";
    case Kind::JeffreysRisk: return "jeffreys_risk";
    case Kind::EbRisk: return "eb_risk(b=" + short_num(bb) + ")";
  }
  return {};
}

CurveSpec parse_curve_spec(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  CurveSpec spec;
  if (head == "eb") {
    spec.kind = CurveSpec::Kind::EbDiff;
  } else if (head == "shrinkage") {
    spec.kind = CurveSpec::Kind::ShrinkageDiff;
  } else if (head == "jeffreys-risk") {
    spec.kind = CurveSpec::Kind::JeffreysRisk;
  } else if (head == "eb-risk") {
    spec.kind = CurveSpec::Kind::EbRisk;
  } else {
    throw UsageError("unknown curve '" + std::string(text) + "'");
  }
  if (colon != std::string_view::npos) {
    const std::string_view arg = text.substr(colon + 1);
    const bool takes_b = spec.kind == CurveSpec::Kind::EbDiff || spec.kind == CurveSpec::Kind::EbRisk;
    if (!takes_b) throw UsageError("curve '" + std::string(head) + "' takes no parameter");
    if (arg != "auto") {
      double b = 0.0;
      const auto [end, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), b);
      if (ec != std::errc{} || end != arg.data() + arg.size() || !(b > 0.0)) {
        throw UsageError("curve '" + std::string(text) + "': b must be a positive number");
      }
      spec.b = b;
    }
  }
  return spec;
}

CurveSet compute_curves(const std::vector<CurveSpec>& specs, const ModelConfig& cfg,
                        const Eigen::VectorXd& mu_grid, bool log_values, const SeriesPolicy& policy,
                        unsigned threads) {
  cfg.validate();
  for (Eigen::Index i = 1; i < mu_grid.size(); ++i) {
    if (!(mu_grid(i) > mu_grid(i - 1))) throw UsageError("mu grid must be strictly increasing");
  }
  const auto n = static_cast<std::size_t>(mu_grid.size());
  std::vector<CurvePoint> points(specs.size() * n);
  parallel_for(points.size(), threads, [&](std::size_t k) {
    const CurveSpec& spec = specs[k / n];
    const double mu = mu_grid(static_cast<Eigen::Index>(k % n));
    const double b = positive_b(spec.b.value_or(natural_moment_b(cfg.d)));
    RiskPoint rp;
    switch (spec.kind) {
      case CurveSpec::Kind::EbDiff: rp = risk_diff_eb(mu, b, cfg, policy); break;
      case CurveSpec::Kind::ShrinkageDiff: rp = risk_diff_shrinkage(mu, cfg, policy); break;
      case CurveSpec::Kind::JeffreysRisk:
        rp = risk_jeffreys_direct(Eigen::VectorXd::Constant(cfg.d, mu / cfg.d), cfg, policy);
        break;
      case CurveSpec::Kind::EbRisk: rp = risk_eb(mu, b, cfg, policy); break;
    }
    CurvePoint p{mu, rp.value, rp.err_bound};
    if (log_values) {
      if (!(rp.value > rp.err_bound)) {
        throw NumericalError("cannot take the log of " + spec.label(cfg.d) + " at mu = " +
                             short_num(mu) + ": value is not positive beyond its error bound");
      }
      p.value = std::log(rp.value);
      p.err_bound = rp.err_bound / (rp.value - rp.err_bound);
    }
    points[k] = p;
  });

  CurveSet set;
  for (std::size_t c = 0; c < specs.size(); ++c) {
    set.curves.push_back({specs[c].label(cfg.d), {points.begin() + static_cast<std::ptrdiff_t>(c * n),
                                                  points.begin() + static_cast<std::ptrdiff_t>((c + 1) * n)}});
  }
  return set;
}

CurveSet f_curve(const SeriesPolicy& policy, unsigned threads) {
  const std::size_t n = 2000;
  std::vector<CurvePoint> points(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const double lambda = 0.01 * static_cast<double>(i + 1);
    const SeriesResult f = f_shrink(lambda, policy);
    points[i] = {lambda, f.value, f.err_bound};
  });
  CurveSet set;
  set.x_name = "lambda";
  set.curves.push_back({"f", std::move(points)});
  return set;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Predictive distributions and Kullback-Leibler risks for Poisson counts", "ebpois"};
  build_app(app, o);
  try {
    app.parse(argc, argv);
    if (!o.global.config.empty()) {
      // Re-parse with config entries appended for every option the command
      // line left unset.
      CLI::App* sub = app.get_subcommands().front();
      std::vector<std::string> args(argv, argv + argc);
      for (const auto& [key, value] : load_config_file(o.global.config)) {
        if (key == "config") throw UsageError("config files cannot name another config file");
        CLI::Option* opt = find_option(app, sub, key);
        if (!opt) {
          if (known_elsewhere(app, key)) continue;
          throw UsageError("unknown config key '" + key + "'");
        }
        if (opt->count() > 0) continue;
        args.push_back("--" + key + "=" + value);
      }
      std::vector<const char*> cargs;
      for (const std::string& a : args) cargs.push_back(a.c_str());
      app.clear();
      app.parse(static_cast<int>(cargs.size()), cargs.data());
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "predict") return cmd_predict(o, out, err);
    if (name == "risk-curve") return cmd_risk_curve(o, !o.global.out_dir.empty(), out);
    if (name == "figures") return cmd_figures(o, out);
    return cmd_verify(o, out);
  } catch (const UndefinedEstimatorError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace ebpois::cli
