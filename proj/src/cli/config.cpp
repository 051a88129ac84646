#include "iotprice/cli/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace iotprice::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      ok = ok || it.key() == k;
    if (!ok)
      throw ConfigError(join(path, it.key()), "unknown field");
  }
}

const json& object_at(const json& parent, const char* key,
                      const std::string& path) {
  const json& j = parent.at(key);
  if (!j.is_object())
    throw ConfigError(join(path, key), "expected an object");
  return j;
}

double number_or(const json& obj, const char* key, const std::string& path,
                 double fallback) {
  if (!obj.contains(key))
    return fallback;
  const json& j = obj.at(key);
  if (!j.is_number())
    throw ConfigError(join(path, key), "expected a number");
  return j.get<double>();
}

int int_or(const json& obj, const char* key, const std::string& path,
           int fallback) {
  if (!obj.contains(key))
    return fallback;
  const json& j = obj.at(key);
  if (!j.is_number_integer())
    throw ConfigError(join(path, key), "expected an integer");
  return j.get<int>();
}

std::string string_or(const json& obj, const char* key,
                      const std::string& path, std::string fallback) {
  if (!obj.contains(key))
    return fallback;
  const json& j = obj.at(key);
  if (!j.is_string())
    throw ConfigError(join(path, key), "expected a string");
  return j.get<std::string>();
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError(fmt::format("cannot open '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", fmt::format("'{}' is not valid JSON: {}",
                                      path.string(), e.what()));
  }
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field.empty() ? message : field + ": " + message),
      field_(std::move(field)) {}

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::kCsv ? "csv" : "json";
}

std::vector<double> SweepSpec::points() const {
  std::vector<double> out;
  if (!(step > 0.0) || stop < start)
    return out;
  // Tolerate rounding in (stop - start) / step so the endpoint is kept.
  const auto count =
      static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  out.reserve(static_cast<size_t>(count));
  for (std::int64_t i = 0; i < count; ++i)
    out.push_back(start + static_cast<double>(i) * step);
  return out;
}

void ScenarioConfig::validate() const {
  try {
    market.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError("market", e.what());
  }
  if (!(ad.a1 >= 0.0) || !std::isfinite(ad.a1))
    throw ConfigError("ad.a1", "must be finite and >= 0");
  if (ad.b && (!(*ad.b >= 0.0) || !std::isfinite(*ad.b)))
    throw ConfigError("ad.b", "must be finite and >= 0");
  if (models.empty())
    throw ConfigError("models", "at least one model is required");
  if (sweep.var != "ba1" && sweep.var != "b")
    throw ConfigError("sweep.var", "must be 'ba1' or 'b'");
  if (!std::isfinite(sweep.start) || sweep.start < 0.0)
    throw ConfigError("sweep.start", "must be finite and >= 0");
  if (!std::isfinite(sweep.stop) || sweep.stop < sweep.start)
    throw ConfigError("sweep.stop", "must be >= sweep.start");
  if (!(sweep.step > 0.0) || !std::isfinite(sweep.step))
    throw ConfigError("sweep.step", "must be > 0");
  if (sweep.var == "ba1" && ad.a1 == 0.0 && sweep.stop > 0.0)
    throw ConfigError("ad.a1", "a ba1 sweep needs a1 > 0");
  if (!(push_lambda >= 0.0 && push_lambda <= 1.0))
    throw ConfigError("push_lambda", "must lie in [0, 1]");
  if (verify.grid < 2)
    throw ConfigError("verify.grid", "must be >= 2");
  if (verify.refine_rounds < 0)
    throw ConfigError("verify.refine_rounds", "must be >= 0");
  if (!(verify.tol >= 0.0) || !std::isfinite(verify.tol))
    throw ConfigError("verify.tol", "must be finite and >= 0");
  if (output.path.empty())
    throw ConfigError("output.path", "must not be empty");
}

ScenarioConfig config_from_json(const json& j) {
  if (!j.is_object())
    throw ConfigError("", "scenario must be a JSON object");
  reject_unknown(j, "",
                 {"market", "ad", "models", "sweep", "push_lambda", "verify",
                  "output", "figure"});
  ScenarioConfig cfg;

  if (j.contains("market")) {
    const json& m = object_at(j, "market", "");
    reject_unknown(m, "market", {"d", "d_max", "alpha", "beta", "kappa"});
    cfg.market.d = number_or(m, "d", "market", cfg.market.d);
    cfg.market.d_max = number_or(m, "d_max", "market", cfg.market.d_max);
    cfg.market.alpha = number_or(m, "alpha", "market", cfg.market.alpha);
    cfg.market.beta = number_or(m, "beta", "market", cfg.market.beta);
    cfg.market.a2_model.kappa =
        number_or(m, "kappa", "market", cfg.market.a2_model.kappa);
  }
  if (j.contains("ad")) {
    const json& a = object_at(j, "ad", "");
    reject_unknown(a, "ad", {"a1", "b", "pool"});
    cfg.ad.a1 = number_or(a, "a1", "ad", cfg.ad.a1);
    if (a.contains("b"))
      cfg.ad.b = number_or(a, "b", "ad", 0.0);
    if (a.contains("pool"))
      cfg.ad.pool = string_or(a, "pool", "ad", "");
  }
  if (j.contains("models")) {
    const json& m = j.at("models");
    if (!m.is_array())
      throw ConfigError("models", "expected an array of model names");
    cfg.models.clear();
    for (size_t i = 0; i < m.size(); ++i) {
      const std::string where = fmt::format("models[{}]", i);
      if (!m[i].is_string())
        throw ConfigError(where, "expected a model name");
      const auto model = parse_model(m[i].get<std::string>());
      if (!model)
        throw ConfigError(where, "unknown model (push, pull or hybrid)");
      cfg.models.push_back(*model);
    }
  }
  if (j.contains("sweep")) {
    const json& s = object_at(j, "sweep", "");
    reject_unknown(s, "sweep", {"var", "start", "stop", "step"});
    cfg.sweep.var = string_or(s, "var", "sweep", cfg.sweep.var);
    cfg.sweep.start = number_or(s, "start", "sweep", cfg.sweep.start);
    cfg.sweep.stop = number_or(s, "stop", "sweep", cfg.sweep.stop);
    cfg.sweep.step = number_or(s, "step", "sweep", cfg.sweep.step);
  }
  cfg.push_lambda = number_or(j, "push_lambda", "", cfg.push_lambda);
  if (j.contains("verify")) {
    const json& v = object_at(j, "verify", "");
    reject_unknown(v, "verify", {"grid", "refine_rounds", "tol"});
    cfg.verify.grid = int_or(v, "grid", "verify", cfg.verify.grid);
    cfg.verify.refine_rounds =
        int_or(v, "refine_rounds", "verify", cfg.verify.refine_rounds);
    cfg.verify.tol = number_or(v, "tol", "verify", cfg.verify.tol);
  }
  if (j.contains("output")) {
    const json& o = object_at(j, "output", "");
    reject_unknown(o, "output", {"format", "path"});
    const std::string format = string_or(o, "format", "output", "csv");
    if (format == "csv")
      cfg.output.format = OutputFormat::kCsv;
    else if (format == "json")
      cfg.output.format = OutputFormat::kJson;
    else
      throw ConfigError("output.format", "must be 'csv' or 'json'");
    cfg.output.path = string_or(o, "path", "output", cfg.output.path);
  }
  if (j.contains("figure"))
    cfg.figure = string_or(j, "figure", "", "");

  cfg.validate();
  return cfg;
}

json to_json(const ScenarioConfig& cfg) {
  json j;
  j["market"] = {{"d", cfg.market.d},
                 {"d_max", cfg.market.d_max},
                 {"alpha", cfg.market.alpha},
                 {"beta", cfg.market.beta},
                 {"kappa", cfg.market.a2_model.kappa}};
  j["ad"] = {{"a1", cfg.ad.a1}};
  if (cfg.ad.b)
    j["ad"]["b"] = *cfg.ad.b;
  if (cfg.ad.pool)
    j["ad"]["pool"] = *cfg.ad.pool;
  j["models"] = json::array();
  for (Model m : cfg.models)
    j["models"].push_back(std::string(to_string(m)));
  j["sweep"] = {{"var", cfg.sweep.var},
                {"start", cfg.sweep.start},
                {"stop", cfg.sweep.stop},
                {"step", cfg.sweep.step}};
  j["push_lambda"] = cfg.push_lambda;
  j["verify"] = {{"grid", cfg.verify.grid},
                 {"refine_rounds", cfg.verify.refine_rounds},
                 {"tol", cfg.verify.tol}};
  j["output"] = {{"format", std::string(to_string(cfg.output.format))},
                 {"path", cfg.output.path}};
  if (cfg.figure)
    j["figure"] = *cfg.figure;
  return j;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path));
}

std::optional<std::filesystem::path> resolve_config_path(
    const std::optional<std::string>& flag) {
  namespace fs = std::filesystem;
  const char* env = std::getenv(kConfigDirEnv);
  if (flag) {
    const fs::path p(*flag);
    if (p.is_absolute() || fs::exists(p) || !env)
      return p;
    const fs::path in_dir = fs::path(env) / p;
    return fs::exists(in_dir) ? in_dir : p;
  }
  if (env) {
    const fs::path fallback = fs::path(env) / "default.json";
    if (fs::exists(fallback))
      return fallback;
  }
  return std::nullopt;
}

AdvertiserPool pool_from_json(const json& j) {
  if (!j.is_object())
    throw ConfigError("", "advertiser pool must be a JSON object");
  reject_unknown(j, "",
                 {"valuations", "volume_per_firm", "a_max", "b_max",
                  "g_model", "grid_steps"});
  AdvertiserPool pool;
  if (j.contains("valuations")) {
    const json& v = j.at("valuations");
    if (!v.is_array())
      throw ConfigError("valuations", "expected an array of numbers");
    for (size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number())
        throw ConfigError(fmt::format("valuations[{}]", i),
                          "expected a number");
      pool.valuations.push_back(v[i].get<double>());
    }
  }
  pool.volume_per_firm = number_or(j, "volume_per_firm", "", 1.0);
  if (!j.contains("a_max"))
    throw ConfigError("a_max", "required");
  if (!j.contains("b_max"))
    throw ConfigError("b_max", "required");
  pool.a_max = number_or(j, "a_max", "", 0.0);
  pool.b_max = number_or(j, "b_max", "", 0.0);
  if (j.contains("g_model")) {
    const json& g = object_at(j, "g_model", "");
    reject_unknown(g, "g_model", {"m"});
    pool.g_model = LinearParticipation{number_or(g, "m", "g_model", 0.0)};
  }
  pool.functional_grid_steps =
      int_or(j, "grid_steps", "", pool.functional_grid_steps);
  try {
    pool.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("pool", e.what());
  }
  return pool;
}

json to_json(const AdvertiserPool& pool) {
  json j;
  j["valuations"] = pool.valuations;
  j["volume_per_firm"] = pool.volume_per_firm;
  j["a_max"] = pool.a_max;
  j["b_max"] = pool.b_max;
  if (pool.g_model)
    j["g_model"] = {{"m", pool.g_model->m}};
  j["grid_steps"] = pool.functional_grid_steps;
  return j;
}

AdvertiserPool load_pool(const std::filesystem::path& path) {
  return pool_from_json(read_json_file(path));
}

std::string config_hash(const ScenarioConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace iotprice::cli
