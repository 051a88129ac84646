#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "iotprice/cli/commands.hpp"
#include "iotprice/equilibrium.hpp"

namespace iotprice::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "iotprice");
  std::vector<char*> argv;
  for (std::string& a : args)
    argv.push_back(a.data());
  std::ostringstream out, err;
  const int code =
      run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "iotprice_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    out.push_back(line);
  return out;
}

TEST(Config, DefaultsAndOverrides) {
  const ScenarioConfig c = config_from_json(json::parse(
      R"({"market": {"d": 2}, "models": ["pull"], "push_lambda": 0.25})"));
  EXPECT_DOUBLE_EQ(c.market.d, 2.0);
  EXPECT_DOUBLE_EQ(c.market.d_max, 15.0);
  EXPECT_EQ(c.models, std::vector<Model>{Model::kPull});
  EXPECT_DOUBLE_EQ(c.push_lambda, 0.25);
  EXPECT_EQ(c.sweep.points().size(), 151u);
}

TEST(Config, ErrorsNameTheField) {
  auto field_of = [](const char* text) {
    try {
      config_from_json(json::parse(text));
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(field_of(R"({"market": {"dd": 1}})"), "market.dd");
  EXPECT_EQ(field_of(R"({"market": {"d": "x"}})"), "market.d");
  EXPECT_EQ(field_of(R"({"sweep": {"start": 5, "stop": 1}})"), "sweep.stop");
  EXPECT_EQ(field_of(R"({"sweep": {"step": 0}})"), "sweep.step");
  EXPECT_EQ(field_of(R"({"push_lambda": 2})"), "push_lambda");
  EXPECT_EQ(field_of(R"({"models": ["push", "bundle"]})"), "models[1]");
  EXPECT_EQ(field_of(R"({"output": {"format": "xml"}})"), "output.format");
}

TEST(Config, JsonRoundTripAndStableHash) {
  ScenarioConfig c;
  c.market.d = 0.5;
  c.figure = "fig7";
  const ScenarioConfig back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
  ScenarioConfig other = c;
  other.push_lambda = 0.4;
  EXPECT_NE(config_hash(other), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);
}

TEST(Pool, SchemaAndErrors) {
  const AdvertiserPool p = pool_from_json(json::parse(
      R"({"valuations": [1, 2, 3], "a_max": 2, "b_max": 4})"));
  EXPECT_EQ(p.valuations.size(), 3u);
  EXPECT_EQ(pool_from_json(to_json(p)).valuations, p.valuations);
  EXPECT_THROW(pool_from_json(json::parse(R"({"valuations": [1]})")),
               ConfigError);
  EXPECT_THROW(pool_from_json(json::parse(R"({"a_max": 1, "b_max": 2})")),
               ConfigError);
  EXPECT_THROW(load_pool(scratch("missing_pool.json")), IoError);
}

TEST(Sweep, RowCountOrderAndSaturation) {
  ScenarioConfig c;
  const auto rows = run_sweep(c, std::nullopt);
  ASSERT_EQ(rows.size(), 453u);
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].model, kAllModels[i / 151]);
    EXPECT_DOUBLE_EQ(rows[i].ba1, static_cast<double>(i % 151));
    if (rows[i].model == Model::kPush && rows[i].ba1 >= 75.0) {
      EXPECT_DOUBLE_EQ(rows[i].eq.payoffs.u_iotsp, 225.0);
    }
  }
}

TEST(Sweep, SinglePullPointAtZeroRevenue) {
  const CliResult r = run({"sweep", "--model", "pull", "--sweep", "ba1:0:0:1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0].rfind("# iotprice 0.1.0 config=", 0), 0u);
  EXPECT_EQ(ls[1],
            "model,ba1,regime,unique,p_i,w_eff,c_eff,p_w_unit,p_c_unit,"
            "demand,u_iotsp,u_wsp,u_csp,u_wsp_worst,u_wsp_best,u_csp_worst,"
            "u_csp_best");
  EXPECT_EQ(ls[2],
            "pull,0,low,true,3.75,3.75,3.75,1.875,2.5,3.75,14.0625,14.0625,"
            "14.0625,14.0625,14.0625,14.0625,14.0625");
}

TEST(Sweep, CsvIsBitStable) {
  const CliResult a = run({"sweep"});
  const CliResult b = run({"sweep"});
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out).size(), 455u);
}

TEST(Sweep, JsonFormat) {
  const CliResult r = run({"sweep", "--model", "hybrid", "--sweep", "ba1:30:40:10",
                     "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_DOUBLE_EQ(j["rows"][1]["u_iotsp"].get<double>(), 56.25);
  EXPECT_EQ(j["rows"][0]["regime"], "high");
}

TEST(Sweep, FixedPriceSplitsRevenueIntoVolume) {
  ScenarioConfig c;
  c.ad.b = 2.0;
  const AdState ad = sweep_point_state(c, 10.0, std::nullopt);
  EXPECT_DOUBLE_EQ(ad.b(), 2.0);
  EXPECT_DOUBLE_EQ(ad.a1(), 5.0);
}

TEST(Figure, DemandCompareMatchesModels) {
  const CliResult r = run({"sweep", "--figure", "demand-compare", "--sweep",
                     "ba1:0:150:5", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["figure"], "fig5");
  ASSERT_EQ(j["series"].size(), 3u);
  const MarketParams p;
  const auto& ba1 = j["ba1"];
  for (size_t i = 0; i < ba1.size(); ++i) {
    const AdState ad = AdState::from_revenue(ba1[i].get<double>(), 1.0, p);
    EXPECT_DOUBLE_EQ(j["series"]["push_demand"][i].get<double>(),
                     push_spne(p, ad).payoffs.demand);
    EXPECT_DOUBLE_EQ(j["series"]["pull_demand"][i].get<double>(),
                     pull_ne(p, ad).payoffs.demand);
    EXPECT_DOUBLE_EQ(j["series"]["hybrid_demand"][i].get<double>(),
                     hybrid_spne(p, ad).payoffs.demand);
  }
}

TEST(Figure, PresetsPinTheExampleMarket) {
  ScenarioConfig c;
  c.market.d = 3.0;
  c.market.d_max = 2.0;
  const FigureData f = run_figure("fig2", c);
  ASSERT_EQ(f.series.size(), 2u);
  EXPECT_DOUBLE_EQ(f.series[0].second.back(), 225.0);
  EXPECT_DOUBLE_EQ(f.series[1].second.back(), 15.0 * 150.0 - 225.0);
  for (const char* name : {"fig3", "fig4", "fig6"})
    EXPECT_EQ(run_figure(name, c).series.size(), 3u) << name;
  const FigureData f7 = run_figure("fig7", c);
  ASSERT_EQ(f7.series.size(), 4u);
  EXPECT_EQ(f7.series[0].first, "push_u_wsp_worst");
  EXPECT_EQ(run_figure("fig8", c).series[1].first, "push_u_csp_best");
  EXPECT_THROW(run_figure("fig9", c), ConfigError);
}

TEST(Verify, DefaultScenarioPasses) {
  const CliResult r = run({"verify", "--sweep", "ba1:0:142.5:7.5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["all_passed"].get<bool>());
  EXPECT_EQ(j["points"].size(), 60u);
  EXPECT_TRUE(j["points"][0].contains("worst_deviator"));
}

TEST(Verify, PerturbationFails) {
  const CliResult r =
      run({"verify", "--sweep", "ba1:0:142.5:7.5", "--perturb", "w:+0.5"});
  EXPECT_EQ(r.code, kExitVerificationFailed);
  EXPECT_FALSE(json::parse(r.out)["all_passed"].get<bool>());
}

TEST(Verify, PerturbationParsing) {
  const Perturbation p = Perturbation::parse("c:-0.25");
  EXPECT_EQ(p.var, Perturbation::Var::kC);
  EXPECT_DOUBLE_EQ(p.delta, -0.25);
  EXPECT_DOUBLE_EQ(p.apply(StrategyProfile{1, {1, 0.1}}).eff.c, 0.0);
  EXPECT_THROW(Perturbation::parse("q:+1"), ConfigError);
  EXPECT_THROW(Perturbation::parse("w+1"), ConfigError);
}

TEST(ExitStatus, ConfigAndIoErrors) {
  EXPECT_EQ(run({"verify", "--sweep", "ba1:10:5:1"}).code, kExitConfigError);
  EXPECT_EQ(run({"sweep", "--sweep", "ba1:0:10"}).code, kExitConfigError);
  EXPECT_EQ(run({"sweep", "--lambda", "1.5"}).code, kExitConfigError);
  EXPECT_EQ(run({"sweep", "--model", "bundle"}).code, kExitConfigError);
  EXPECT_EQ(run({"sweep", "--bogus"}).code, kExitConfigError);
  EXPECT_EQ(run({}).code, kExitConfigError);
  EXPECT_EQ(run({"sweep", "--config", scratch("absent.json").string()}).code,
            kExitIoError);
  EXPECT_EQ(run({"sweep", "--out", "/nonexistent-dir/x.csv"}).code,
            kExitIoError);
  const fs::path bad = scratch("bad.json");
  write(bad, R"({"sweep": {"step": -1}})");
  const CliResult r = run({"sweep", "--config", bad.string()});
  EXPECT_EQ(r.code, kExitConfigError);
  EXPECT_NE(r.err.find("sweep.step"), std::string::npos);
}

TEST(ConfigFile, FlagsOverrideFileAndFileWritesOutput) {
  const fs::path cfg = scratch("scenario.json");
  const fs::path out = scratch("scenario_out.csv");
  write(cfg, json({{"models", {"push", "pull"}},
                   {"sweep", {{"start", 0}, {"stop", 10}, {"step", 5}}},
                   {"output", {{"path", out.string()}}}})
                 .dump());
  fs::remove(out);
  ASSERT_EQ(run({"sweep", "--config", cfg.string()}).code, kExitOk);
  EXPECT_EQ(lines([&] {
              std::ifstream in(out);
              return std::string(std::istreambuf_iterator<char>(in), {});
            }())
                .size(),
            2u + 6u);
  const CliResult r = run({"sweep", "--config", cfg.string(), "--model", "hybrid",
                     "--out", "-"});
  EXPECT_EQ(lines(r.out).size(), 2u + 3u);
}

TEST(ConfigFile, EnvironmentDirectorySuppliesDefaults) {
  const fs::path dir = scratch("envdir");
  fs::create_directories(dir);
  write(dir / "default.json", R"({"models": ["pull"], "sweep": {"stop": 4}})");
  write(dir / "named.json", R"({"models": ["hybrid"], "sweep": {"stop": 1}})");
  ::setenv(kConfigDirEnv, dir.c_str(), 1);
  const CliResult a = run({"sweep"});
  const CliResult b = run({"sweep", "--config", "named.json"});
  ::unsetenv(kConfigDirEnv);
  EXPECT_EQ(lines(a.out).size(), 2u + 5u);
  EXPECT_EQ(lines(b.out).size(), 2u + 2u);
}

TEST(Compare, ThresholdsAndRoundTrip) {
  const CliResult r = run({"compare", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  const double expect[] = {5, 6.2132, 15, 30, 75, 82.5};
  ASSERT_EQ(j["thresholds"].size(), 6u);
  for (size_t i = 0; i < 6; ++i)
    EXPECT_NEAR(j["thresholds"][i]["value"].get<double>(), expect[i], 1e-4);

  const ComparisonReport report = comparison_report_from_json(j);
  json again = to_json(report);
  json original = j;
  original.erase("config_hash");
  EXPECT_EQ(again, original);
  EXPECT_EQ(report.table1.rows[3].high,
            (std::vector<Model>{Model::kHybrid, Model::kPush}));
}

TEST(Compare, CsvCarriesThresholdComments) {
  const CliResult r = run({"compare"});
  ASSERT_EQ(r.code, kExitOk);
  const auto ls = lines(r.out);
  EXPECT_EQ(ls[1], "# threshold pull_free=5");
  EXPECT_EQ(ls[6], "# threshold csp_push_hybrid=82.5");
  EXPECT_EQ(ls[7].substr(0, 16), "ba1,push_demand,");
}

TEST(OptimalB, FromPoolFile) {
  const fs::path pool = scratch("pool.json");
  write(pool,
        R"({"valuations": [1,2,3,4,5,6,7,8,9,10], "a_max": 10, "b_max": 11})");
  const CliResult r = run({"optimal-b", "--pool", pool.string(), "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  for (const char* m : {"push", "pull", "hybrid"}) {
    EXPECT_EQ(j["models"][m]["maximizers"], json::array({5.0, 6.0}));
    EXPECT_DOUBLE_EQ(j["models"][m]["achieved_ad_rev"].get<double>(), 30.0);
  }
  const CliResult csv = run({"optimal-b", "--pool", pool.string(), "--model", "pull"});
  EXPECT_EQ(lines(csv.out).back(), "pull,5;6,30,150");
  EXPECT_EQ(run({"optimal-b"}).code, kExitConfigError);
}

}  // namespace
}  // namespace iotprice::cli
