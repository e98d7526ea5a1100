#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "wassmap/config.hpp"
#include "wassmap/isomap.hpp"

namespace wassmap::driver {

/// Experiment directory contract shared by the subcommands: generate
/// fills it with measures_*.json (+ truth.csv, labels.csv,
/// pixels.csv), distances adds distances.csv/.json and w2cache.json,
/// embed adds embedding.csv, eigenvalues.json and scatter.svg, isomap
/// its isomap_* counterparts, report the final report.json/.txt.

struct GenerateResult {
  int count = 0;
  std::string name;
};

/// Command-line overrides for config values; empty fields keep the
/// config's own settings. per_class uses "label:count" pairs.
struct GenerateOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;  // pushforward | raster
  std::string images_path;
  std::string labels_path;
  std::vector<std::string> per_class;
};

GenerateResult cmd_generate(const std::string& config_path, const std::string& out_dir,
                            const GenerateOverrides& overrides = {});

struct DistanceResult {
  std::int64_t solved = 0;
  std::int64_t cache_hits = 0;
  double seconds = 0.0;
};

DistanceResult cmd_distances(const std::string& out_dir, int threads = 0);

void cmd_embed(const std::string& out_dir, int embed_dim = 0);

void cmd_isomap(const std::string& out_dir, const NeighborRule& rule, int embed_dim = 0,
                bool largest_component_only = false, int threads = 0);

/// Returns the report JSON text after writing report.json/report.txt.
std::string cmd_report(const std::string& out_dir, bool with_scale = false);

struct RunAllResult {
  int executed = 0;
  int skipped = 0;
};

/// Runs every config in the list end to end; configs whose input data
/// files are missing (MNIST paths) are reported and skipped.
RunAllResult cmd_run_all(const std::vector<std::string>& config_paths,
                         const std::string& out_root, int threads = 0);

}  // namespace wassmap::driver
