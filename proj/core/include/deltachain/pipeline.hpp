#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "deltachain/chain_graph.hpp"
#include "deltachain/io.hpp"
#include "deltachain/measures.hpp"

namespace deltachain {

inline constexpr const char* kVersion = "1.0.0";

struct TargetComponent {
  Word word;
  Rational weight;
};

struct TargetSpec {
  std::size_t level = 0;  // 0: finest level
  std::vector<TargetComponent> components;  // empty: first fixed point + first 2-cycle, 1/2 each
};

struct PipelineConfig {
  std::filesystem::path system_path;
  std::optional<Json> system_inline;
  std::size_t n_max = 8;
  std::size_t period_cap = 5;
  std::size_t enumeration_cap = 10000;
  std::size_t cylinder_depth = 3;
  std::int64_t pi_radius = 8;
  std::vector<double> eps = {0.5, 1.0 / 3.0};
  TargetSpec target;
  std::vector<std::size_t> block_scales = {8, 16, 32, 64, 128, 256};
  std::filesystem::path output_dir = "report";
  std::uint64_t seed = 0;
  double density_threshold = 0.05;
  double hull_tolerance = 0.05;
  std::size_t distance_sample_cap = 64;
  std::size_t mixture_samples = 32;
  unsigned threads = 0;
};

/// Strict parse: unknown fields and bad values raise SchemaError with the
/// JSON pointer. A relative system path is resolved against `base_dir`.
PipelineConfig config_from_json(const Json& doc, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);
/// Effective configuration with defaults filled in.
Json config_to_json(const PipelineConfig& cfg);
/// FNV-1a 64 over the compact dump of config_to_json, as 16 hex digits.
std::string config_hash(const PipelineConfig& cfg);

LoadedSystem load_pipeline_system(const PipelineConfig& cfg);

struct SpacingEntry {
  double eps;
  std::int64_t window;
  std::int64_t spacing;
};

struct LevelReport {
  std::size_t level = 0;
  double delta = 1.0;
  std::size_t edge_count = 0;
  MixingCertificate certificate;
  std::size_t ergodic_count = 0;
  bool truncated = false;
  std::size_t sampled = 0;
  std::vector<SpacingEntry> spacing;
};

struct CrossLevelEntry {
  std::size_t coarse = 0;  // smaller n, larger delta
  std::size_t fine = 0;
  double distance = 0.0;
  double error_bar = 0.0;
  double besicovitch_bound = 0.0;
  bool one_sided_holds = true;
  double hull_full = 0.0;
  double hull_difference = 0.0;
  bool hull_holds = true;
};

struct DensityRow {
  std::size_t block_scale = 0;
  std::size_t period = 0;
  std::optional<double> weakstar;
  std::optional<double> pi_bar;
  std::string error;
};

struct DensityReport {
  std::size_t level = 0;
  std::vector<TargetComponent> target;
  std::vector<DensityRow> rows;
  std::optional<std::size_t> l_star;
  std::optional<double> fitted_rate;  // least-squares c in weakstar ~ c / L
  bool nonincreasing_after_first = true;
};

struct StageError {
  std::string stage;
  std::size_t level = 0;
  std::string kind;
  std::string message;
};

struct PipelineReport {
  std::string version = kVersion;
  std::string generated_at;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::size_t points = 0;
  bool clamped = false;
  std::vector<LevelReport> levels;
  std::vector<CrossLevelEntry> cross_level;
  std::vector<double> distance_to_finest;  // by level, finest maps to 0
  std::optional<double> trend_rate;        // least-squares c in distance ~ c * delta
  std::optional<DensityReport> density;
  std::vector<StageError> errors;
};

PipelineReport run_pipeline(const PipelineConfig& cfg);

/// Sigmund approximants of the target at each block scale of cfg, measured
/// against the target mixture. Throws NotMixing if the level is not primitive.
DensityReport density_demo(const PipelineConfig& cfg, const ChainGraph& g,
                           const ErgodicSet& ergodic);

Json report_to_json(const PipelineReport& report);
PipelineReport report_from_json(const Json& doc);

/// report.json, levels.csv, cross_level.csv, density.csv, levels.dat and
/// density.dat under `dir`.
void emit_report(const PipelineReport& report, const std::filesystem::path& dir);

}  // namespace deltachain
