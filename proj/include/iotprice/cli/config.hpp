#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "iotprice/ad_market.hpp"
#include "iotprice/model.hpp"
#include "json.hpp"

namespace iotprice::cli {

// Validation failure of a scenario or pool file; `field()` is the dotted
// path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { kCsv, kJson };

struct SweepSpec {
  std::string var = "ba1";  // "ba1" or "b"
  double start = 0.0;
  double stop = 150.0;
  double step = 1.0;

  // start, start + step, ... up to stop inclusive.
  std::vector<double> points() const;
};

struct AdSpec {
  // Fixed ad volume per user used to turn a revenue into (b, a1).
  double a1 = 1.0;
  std::optional<double> b;
  std::optional<std::string> pool;
};

struct VerifySpec {
  int grid = 2001;
  int refine_rounds = 3;
  double tol = 1e-6;
};

struct OutputSpec {
  OutputFormat format = OutputFormat::kCsv;
  std::string path = "-";
};

struct ScenarioConfig {
  MarketParams market;
  AdSpec ad;
  std::vector<Model> models{Model::kPush, Model::kPull, Model::kHybrid};
  SweepSpec sweep;
  double push_lambda = 0.5;
  VerifySpec verify;
  OutputSpec output;
  std::optional<std::string> figure;

  // Throws ConfigError naming the first invalid field.
  void validate() const;
};

// Environment variable naming the directory searched for relative config
// paths and for `default.json` when no --config is given.
inline constexpr const char kConfigDirEnv[] = "IOTPRICE_CONFIG_DIR";

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& config);

// Reads and validates a scenario file. Throws IoError when unreadable and
// ConfigError when malformed.
ScenarioConfig load_config(const std::filesystem::path& path);

// Resolves --config against the working directory, then kConfigDirEnv.
std::optional<std::filesystem::path> resolve_config_path(
    const std::optional<std::string>& flag);

AdvertiserPool pool_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AdvertiserPool& pool);
AdvertiserPool load_pool(const std::filesystem::path& path);

// Stable 64-bit FNV-1a digest of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

std::string_view to_string(OutputFormat format);

}  // namespace iotprice::cli
