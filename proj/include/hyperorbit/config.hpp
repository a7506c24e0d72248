#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperorbit/metric.hpp"

namespace hyperorbit {

// Module versions stamped into every artifact header.
nlohmann::ordered_json module_versions();

struct MetricSpec {
  std::string kind = "word";  // word | scaled_word | green_closed_form | green_numeric | fuchsian
  double factor = 1.0;        // scaled_word
  int absorbing_radius = 11;  // green_numeric
  std::vector<double> walk;   // green_numeric step law by symbol; empty = uniform
  double walk_identity = 0.0;
};

/// Parsed run configuration. The group spec is kept as JSON (with any
/// "path" reference inlined) so it hashes canonically.
struct RunConfig {
  nlohmann::json group;
  std::vector<MetricSpec> metrics;

  int r_cone = 1;
  int validate_n = 6;
  bool geodesic = false;

  int depth = 4;
  double tol = 1e-8;  // lattice-test tolerance
  int l_max = 6;
  int gibbs_depth = 6;
  double scan_t_min = 0.1;
  double scan_t_max = 30.0;
  int scan_points = 300;
  int scan_depth = 0;  // 0 = depth

  int n_max = 10;
  double eps = 0.5;
  int count_points = 300;

  std::uint64_t seed = 1;

  void validate() const;
  // Sorted-key JSON of every field that influences results.
  nlohmann::json canonical() const;
  // FNV-1a 64 of canonical().dump(), as 16 hex digits.
  std::string hash() const;
};

RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

Presentation build_group(const nlohmann::json& spec);
MetricModel build_metric(const Presentation& presentation, const MetricSpec& spec);

std::string fnv1a_hex(const std::string& bytes);

// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace hyperorbit
