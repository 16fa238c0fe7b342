#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pragnav/pipeline/experiment.hpp"

namespace pragnav::cli {

// Thrown for malformed or unknown configuration keys.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  pipeline::ExperimentConfig experiment;
  std::filesystem::path output_dir = "run";
};

// Every key is optional except "seed"; unknown keys at any level are
// rejected.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

// Full configuration with defaults filled in; the hash of its compact dump
// identifies a run.
nlohmann::json config_to_json(const RunConfig& config);
std::string config_hash(const RunConfig& config);

// `output_dir`, resolved against PRAGNAV_OUTPUT_ROOT when relative and the
// variable is set.
std::filesystem::path resolve_output_dir(const RunConfig& config);

}  // namespace pragnav::cli
