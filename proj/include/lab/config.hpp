#pragma once

// Experiment configuration: JSON schema, parsing and the time-grid builder.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lab/envelope.hpp"

namespace lab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TGridSpec {
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
  enum class Spacing { linear, log } spacing = Spacing::linear;

  std::vector<double> make() const;
};

struct FSpec {
  ReproducingFunction::Form form = ReproducingFunction::Form::exp_power;
  double a = 0.5;
  double p = 2.0;
  double mu = 0.25;
};

struct ModelSpec {
  std::string family;
  int n_sites = 0;
  int local_dim = 2;
  std::string params_json;  // family-specific parameters, raw JSON object
};

struct ExperimentConfig {
  std::string experiment;
  ModelSpec model;
  TGridSpec t_grid;
  FSpec F;
  std::vector<std::pair<int, int>> site_pairs;
  std::uint64_t seed = 1;
  double hypothesis_tolerance = 1e-10;
  std::vector<double> gammas;            // localization sweep
  double clustering_xi = 1.0;            // from a fitted light-cone envelope
  double clustering_v = 0.0;
  std::string observable = "sz";
};

/// Parses and schema-validates a config document. Throws ConfigError.
ExperimentConfig parse_config(const std::string& json_text);

ExperimentConfig load_config_file(const std::string& path);

}  // namespace lab
