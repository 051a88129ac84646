#include "iotprice/cli/commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "iotprice/equilibrium.hpp"

namespace iotprice::cli {

using nlohmann::json;

namespace {

double parse_number(const std::string& text, const std::string& field) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last)
    throw ConfigError(field, fmt::format("'{}' is not a number", text));
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep))
    parts.push_back(part);
  if (!text.empty() && text.back() == sep)
    parts.emplace_back();
  return parts;
}

SweepSpec parse_sweep(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4 || (parts[0] != "ba1" && parts[0] != "b"))
    throw ConfigError("sweep", "expected VAR:START:STOP:STEP with VAR ba1|b");
  SweepSpec spec;
  spec.var = parts[0];
  spec.start = parse_number(parts[1], "sweep.start");
  spec.stop = parse_number(parts[2], "sweep.stop");
  spec.step = parse_number(parts[3], "sweep.step");
  return spec;
}

std::vector<Model> parse_models(const std::string& text) {
  if (text == "all")
    return {std::begin(kAllModels), std::end(kAllModels)};
  const auto m = parse_model(text);
  if (!m)
    throw ConfigError("models", fmt::format("unknown model '{}'", text));
  return {*m};
}

std::string resolve_pool_path(const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.is_absolute() || fs::exists(p))
    return path;
  if (const char* env = std::getenv(kConfigDirEnv)) {
    const fs::path in_dir = fs::path(env) / p;
    if (fs::exists(in_dir))
      return in_dir.string();
  }
  return path;
}

std::optional<AdvertiserPool> pool_of(const ScenarioConfig& config) {
  if (!config.ad.pool)
    return std::nullopt;
  return load_pool(resolve_pool_path(*config.ad.pool));
}

void emit(const std::string& path, const std::string& payload,
          std::ostream& out) {
  if (path == "-") {
    out << payload;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw IoError(fmt::format("cannot write '{}'", path));
  file << payload;
  if (!file)
    throw IoError(fmt::format("write to '{}' failed", path));
}

std::string dump(const json& j) {
  return j.dump(2) + "\n";
}

}  // namespace

Perturbation Perturbation::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ConfigError("perturb", "expected VAR:DELTA, e.g. w:+0.5");
  const std::string var = text.substr(0, colon);
  Perturbation p;
  if (var == "p_i" || var == "pi")
    p.var = Var::kPi;
  else if (var == "w")
    p.var = Var::kW;
  else if (var == "c")
    p.var = Var::kC;
  else
    throw ConfigError("perturb", fmt::format("unknown variable '{}'", var));
  p.delta = parse_number(text.substr(colon + 1), "perturb");
  if (!std::isfinite(p.delta))
    throw ConfigError("perturb", "delta must be finite");
  return p;
}

StrategyProfile Perturbation::apply(StrategyProfile profile) const {
  double& slot = var == Var::kPi  ? profile.p_i
                 : var == Var::kW ? profile.eff.w
                                  : profile.eff.c;
  slot = std::max(0.0, slot + delta);
  return profile;
}

AdState sweep_point_state(const ScenarioConfig& config, double point,
                          const std::optional<AdvertiserPool>& pool) {
  if (config.sweep.var == "b") {
    const double a1 = pool ? participation(point, *pool) : config.ad.a1;
    return AdState(point, a1, config.market);
  }
  if (config.ad.b && *config.ad.b > 0.0)
    return AdState(*config.ad.b, point / *config.ad.b, config.market);
  return AdState::from_revenue(point, config.ad.a1, config.market);
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& config,
                                const std::optional<AdvertiserPool>& pool) {
  config.validate();
  const std::vector<double> points = config.sweep.points();
  std::vector<SweepRow> rows;
  rows.reserve(points.size() * config.models.size());
  for (Model model : config.models) {
    std::vector<SweepRow> block;
    for (double x : points) {
      const AdState ad = sweep_point_state(config, x, pool);
      block.push_back({model, ad.ad_rev(),
                       equilibrium(model, config.market, ad,
                                   config.push_lambda)});
    }
    // A b sweep over a pool need not be monotone in revenue.
    std::stable_sort(block.begin(), block.end(),
                     [](const SweepRow& a, const SweepRow& b) {
                       return a.ba1 < b.ba1;
                     });
    rows.insert(rows.end(), block.begin(), block.end());
  }
  return rows;
}

std::vector<VerifyPoint> run_verify(
    const ScenarioConfig& config, const std::optional<AdvertiserPool>& pool,
    const std::optional<Perturbation>& perturb) {
  config.validate();
  std::vector<VerifyPoint> out;
  for (Model model : config.models) {
    for (double x : config.sweep.points()) {
      const AdState ad = sweep_point_state(config, x, pool);
      StrategyProfile profile =
          equilibrium(model, config.market, ad, config.push_lambda).profile;
      if (perturb)
        profile = perturb->apply(profile);
      const GridSpec grid = GridSpec::for_market(
          config.market, ad, config.verify.grid, config.verify.refine_rounds);
      out.push_back({model, ad.ad_rev(),
                     verify_equilibrium(model, profile, config.market, ad,
                                        grid, config.verify.tol)});
    }
  }
  return out;
}

FigureData run_figure(const std::string& name, ScenarioConfig config) {
  config.market.d = 1.0;
  config.market.d_max = 15.0;
  config.validate();
  if (config.sweep.var != "ba1")
    throw ConfigError("sweep.var", "figure presets sweep ba1");

  FigureData fig;
  fig.name = name == "demand-compare" ? "fig5" : name;
  fig.ba1 = config.sweep.points();

  auto series = [&](Model model, auto pick) {
    std::vector<double> v;
    for (double x : fig.ba1) {
      const AdState ad = AdState::from_revenue(x, config.ad.a1, config.market);
      v.push_back(pick(equilibrium(model, config.market, ad,
                                   config.push_lambda)));
    }
    return v;
  };
  auto add = [&](const std::string& label, Model model, auto pick) {
    fig.series.emplace_back(label, series(model, pick));
  };
  const auto demand_of = [](const EquilibriumOutcome& e) {
    return e.payoffs.demand;
  };
  const auto u_i = [](const EquilibriumOutcome& e) {
    return e.payoffs.u_iotsp;
  };
  const auto u_w = [](const EquilibriumOutcome& e) { return e.payoffs.u_wsp; };
  const auto u_c = [](const EquilibriumOutcome& e) { return e.payoffs.u_csp; };

  if (fig.name == "fig2") {
    add("push_u_iotsp", Model::kPush, u_i);
    add("push_u_wsp_plus_u_csp", Model::kPush,
        [](const EquilibriumOutcome& e) {
          return e.payoffs.u_wsp + e.payoffs.u_csp;
        });
  } else if (fig.name == "fig3" || fig.name == "fig4") {
    const Model m = fig.name == "fig3" ? Model::kPull : Model::kHybrid;
    const std::string p(to_string(m));
    add(p + "_u_iotsp", m, u_i);
    add(p + "_u_wsp", m, u_w);
    add(p + "_u_csp", m, u_c);
  } else if (fig.name == "fig5" || fig.name == "fig6") {
    for (Model m : kAllModels) {
      add(fmt::format("{}_{}", to_string(m),
                      fig.name == "fig5" ? "demand" : "u_iotsp"),
          m, [&](const EquilibriumOutcome& e) {
            return fig.name == "fig5" ? demand_of(e) : u_i(e);
          });
    }
  } else if (fig.name == "fig7") {
    add("push_u_wsp_worst", Model::kPush,
        [](const EquilibriumOutcome& e) { return e.bounds.wsp_worst; });
    add("push_u_wsp_best", Model::kPush,
        [](const EquilibriumOutcome& e) { return e.bounds.wsp_best; });
    add("pull_u_wsp", Model::kPull, u_w);
    add("hybrid_u_wsp", Model::kHybrid, u_w);
  } else if (fig.name == "fig8") {
    add("push_u_csp_worst", Model::kPush,
        [](const EquilibriumOutcome& e) { return e.bounds.csp_worst; });
    add("push_u_csp_best", Model::kPush,
        [](const EquilibriumOutcome& e) { return e.bounds.csp_best; });
    add("pull_u_csp", Model::kPull, u_c);
    add("hybrid_u_csp", Model::kHybrid, u_c);
  } else {
    throw ConfigError("figure", fmt::format("unknown preset '{}'", name));
  }
  return fig;
}

void write_figure_csv(std::ostream& out, const FigureData& fig,
                      const std::string& config_hash) {
  out << provenance_comment(config_hash) << '\n';
  out << "# figure " << fig.name << '\n';
  out << "ba1";
  for (const auto& [label, values] : fig.series)
    out << ',' << label;
  out << '\n';
  for (size_t i = 0; i < fig.ba1.size(); ++i) {
    out << csv_number(fig.ba1[i]);
    for (const auto& [label, values] : fig.series)
      out << ',' << csv_number(values[i]);
    out << '\n';
  }
}

json to_json(const FigureData& fig) {
  json series = json::object();
  for (const auto& [label, values] : fig.series)
    series[label] = values;
  return {{"figure", fig.name}, {"ba1", fig.ba1}, {"series", series}};
}

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> model;
  std::optional<std::string> sweep;
  std::optional<double> lambda;
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<std::string> figure;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> perturb;
  std::optional<std::string> pool;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Scenario file (JSON)");
  cmd->add_option("--model", f.model, "push|pull|hybrid|all");
  cmd->add_option("--sweep", f.sweep, "VAR:START:STOP:STEP, VAR = ba1|b");
  cmd->add_option("--lambda", f.lambda, "Push equilibrium selector in [0,1]");
  cmd->add_option("--grid", f.grid, "Oracle grid points per axis");
  cmd->add_option("--tol", f.tol, "Oracle relative tolerance");
  cmd->add_option("--figure", f.figure, "Figure preset fig2..fig8");
  cmd->add_option("--out", f.out, "Output path, - for stdout");
  cmd->add_option("--format", f.format, "csv|json");
  cmd->add_option("--perturb", f.perturb, "Price shift VAR:+DELTA");
  cmd->add_option("--pool", f.pool, "Advertiser pool file (JSON)");
}

ScenarioConfig build_config(const Flags& f) {
  ScenarioConfig config;
  if (const auto path = resolve_config_path(f.config))
    config = load_config(*path);
  if (f.model)
    config.models = parse_models(*f.model);
  if (f.sweep)
    config.sweep = parse_sweep(*f.sweep);
  if (f.lambda)
    config.push_lambda = *f.lambda;
  if (f.grid)
    config.verify.grid = *f.grid;
  if (f.tol)
    config.verify.tol = *f.tol;
  if (f.figure)
    config.figure = *f.figure;
  if (f.out)
    config.output.path = *f.out;
  if (f.format) {
    if (*f.format == "csv")
      config.output.format = OutputFormat::kCsv;
    else if (*f.format == "json")
      config.output.format = OutputFormat::kJson;
    else
      throw ConfigError("output.format", "must be 'csv' or 'json'");
  }
  if (f.pool)
    config.ad.pool = *f.pool;
  config.validate();
  if (config.sweep.points().empty())
    throw ConfigError("sweep", "sweep has no points");
  return config;
}

int do_sweep(const ScenarioConfig& config, std::ostream& out) {
  const std::string hash = config_hash(config);
  std::ostringstream buf;
  if (config.figure) {
    const FigureData fig = run_figure(*config.figure, config);
    if (config.output.format == OutputFormat::kJson) {
      json j = to_json(fig);
      j["config_hash"] = hash;
      buf << dump(j);
    } else {
      write_figure_csv(buf, fig, hash);
    }
  } else {
    const auto rows = run_sweep(config, pool_of(config));
    if (config.output.format == OutputFormat::kJson)
      buf << dump(sweep_to_json(rows, hash));
    else
      write_sweep_csv(buf, rows, hash);
  }
  emit(config.output.path, buf.str(), out);
  return kExitOk;
}

int do_verify(const ScenarioConfig& config, const Flags& f,
              std::ostream& out) {
  std::optional<Perturbation> perturb;
  if (f.perturb)
    perturb = Perturbation::parse(*f.perturb);
  const auto points = run_verify(config, pool_of(config), perturb);
  bool all = true;
  json arr = json::array();
  for (const VerifyPoint& p : points) {
    all = all && p.report.passed;
    json row = to_json(p.report);
    row["model"] = std::string(to_string(p.model));
    row["ba1"] = p.ba1;
    arr.push_back(std::move(row));
  }
  json summary = {{"tool", "iotprice"},
                  {"version", kToolVersion},
                  {"config_hash", config_hash(config)},
                  {"grid", config.verify.grid},
                  {"tol", config.verify.tol},
                  {"all_passed", all},
                  {"points", std::move(arr)}};
  if (f.perturb)
    summary["perturb"] = *f.perturb;
  emit(config.output.path, dump(summary), out);
  return all ? kExitOk : kExitVerificationFailed;
}

int do_compare(const ScenarioConfig& config, std::ostream& out) {
  if (config.sweep.var != "ba1")
    throw ConfigError("sweep.var", "compare sweeps ba1");
  const int samples = static_cast<int>(config.sweep.points().size());
  const ComparisonReport report =
      compare_models(config.market, config.sweep.start, config.sweep.stop,
                     samples, config.push_lambda);
  const std::string hash = config_hash(config);
  std::ostringstream buf;
  if (config.output.format == OutputFormat::kJson) {
    json j = to_json(report);
    j["config_hash"] = hash;
    buf << dump(j);
  } else {
    write_comparison_csv(buf, report, hash);
  }
  emit(config.output.path, buf.str(), out);
  return kExitOk;
}

int do_optimal_b(const ScenarioConfig& config, std::ostream& out) {
  const auto pool = pool_of(config);
  if (!pool)
    throw ConfigError("ad.pool", "optimal-b needs an advertiser pool");
  const std::string hash = config_hash(config);
  std::ostringstream buf;
  if (config.output.format == OutputFormat::kJson) {
    json j = {{"config_hash", hash}, {"models", json::object()}};
    for (Model m : config.models)
      j["models"][std::string(to_string(m))] =
          to_json(optimal_b(m, *pool, config.market));
    buf << dump(j);
  } else {
    buf << provenance_comment(hash) << '\n'
        << "model,maximizers,achieved_ad_rev,payoff_at_max\n";
    for (Model m : config.models) {
      const BSelection s = optimal_b(m, *pool, config.market);
      std::string list;
      for (double b : s.maximizers)
        list += (list.empty() ? "" : ";") + csv_number(b);
      buf << to_string(m) << ',' << list << ','
          << csv_number(s.achieved_ad_rev) << ','
          << csv_number(s.payoff_at_max) << '\n';
    }
  }
  emit(config.output.path, buf.str(), out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibrium pricing for push, pull and hybrid IoT markets",
               "iotprice"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Flags flags;
  CLI::App* sweep = app.add_subcommand("sweep", "Equilibria over an ad-revenue sweep");
  CLI::App* verify = app.add_subcommand("verify", "Check equilibria with the deviation oracle");
  CLI::App* compare = app.add_subcommand("compare", "Cross-model comparison and thresholds");
  CLI::App* optimal = app.add_subcommand("optimal-b", "IoTSP advertiser price per model");
  for (CLI::App* cmd : {sweep, verify, compare, optimal})
    add_flags(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    const ScenarioConfig config = build_config(flags);
    if (sweep->parsed())
      return do_sweep(config, out);
    if (verify->parsed())
      return do_verify(config, flags, out);
    if (compare->parsed())
      return do_compare(config, out);
    return do_optimal_b(config, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace iotprice::cli
