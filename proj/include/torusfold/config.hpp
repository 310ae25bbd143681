#pragma once

// Experiment configuration: flat "key = value" text, '#' comments, integer
// arrays written as [1, 2, 3].

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torusfold/spectrum.hpp"

namespace torusfold {

struct ExperimentConfig {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> tau;
  std::optional<double> tau_target;
  std::string distribution = "gaussian";
  std::int64_t sparse_k = 4;
  std::uint64_t seed = 1;
  std::int64_t draws = 10;
  double eps = 0.05;
  std::int64_t cap = kDefaultEnumerationCap;
  std::string cb = "2pi";  // "2pi" or "paper"
  double max_grid_points = 8.0e9;
  std::int64_t mc_samples = 0;
  std::string out;
  std::string csv;
  std::string poly;

  // Lemma harness matrix.
  std::int64_t lemma_dim = 3;
  std::int64_t lemma_degree = 8;
  std::vector<std::int64_t> lemma_samples = {16, 64, 256};
  std::int64_t lemma_parts = 5;

  /// Constant used on the right-hand side of the slab estimate.
  double bound_constant() const;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Assigns one key from its textual value; throws ParseError on unknown keys
/// or malformed values.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Canonical "key = value" rendering, parseable by parse_config.
std::string format_config(const ExperimentConfig& cfg);

/// Throws ParseError when the configuration is internally inconsistent.
void validate_config(const ExperimentConfig& cfg);

std::vector<std::int64_t> parse_int_list(std::string_view text);

}  // namespace torusfold
