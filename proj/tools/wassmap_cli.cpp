// Command-line driver: each pipeline stage is a subcommand working on
// an experiment directory, plus run-all to reproduce every checked-in
// experiment config.

#include <CLI11.hpp>
#include <iostream>

#include "wassmap/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Wasserstein isometric mapping pipeline"};
  app.require_subcommand(1);

  std::string config_path, out_dir, out_root = "runs", configs_dir = "configs";
  std::string mode;
  int threads = 0, embed_dim = 0, knn = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false, with_scale = false, largest_component = false;

  auto* generate = app.add_subcommand("generate", "write a measure family + ground truth");
  generate->add_option("--config", config_path, "experiment config file")->required();
  generate->add_option("--out", out_dir, "output directory")->required();
  generate->add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { seed_set = true; });
  generate->add_option("--mode", mode, "pushforward|raster (override config)");

  auto* distances = app.add_subcommand("distances", "pairwise W2^2 matrix with caching");
  distances->add_option("--out", out_dir, "experiment directory")->required();
  distances->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* embed = app.add_subcommand("embed", "classical MDS of the distance matrix");
  embed->add_option("--out", out_dir, "experiment directory")->required();
  embed->add_option("--embed-dim", embed_dim, "embedding dimension");

  auto* iso = app.add_subcommand("isomap", "pixel-space ISOMAP baseline");
  iso->add_option("--out", out_dir, "experiment directory")->required();
  iso->add_option("--embed-dim", embed_dim, "embedding dimension");
  auto* eps_opt = iso->add_option("--epsilon", epsilon, "epsilon-neighborhood rule");
  auto* knn_opt = iso->add_option("--knn", knn, "k-nearest-neighbor rule");
  iso->add_flag("--largest-component", largest_component,
                "embed the largest component instead of failing when disconnected");
  iso->add_option("--threads", threads, "worker threads");

  auto* report = app.add_subcommand("report", "summarize an experiment directory");
  report->add_option("--out", out_dir, "experiment directory")->required();
  report->add_flag("--with-scale", with_scale, "allow global scaling in the alignment");

  auto* run_all = app.add_subcommand("run-all", "run every experiment config");
  run_all->add_option("--configs", configs_dir, "directory of *.cfg files");
  run_all->add_option("--out", out_root, "root output directory");
  run_all->add_option("--threads", threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      const auto r = wassmap::driver::cmd_generate(
          config_path, out_dir, seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt,
          mode.empty() ? std::nullopt : std::optional<std::string>(mode));
      std::cout << "wrote " << r.count << " measures for '" << r.name << "' to " << out_dir
                << "\n";
    } else if (*distances) {
      const auto r = wassmap::driver::cmd_distances(out_dir, threads);
      std::cout << "solved=" << r.solved << " cache_hits=" << r.cache_hits
                << " seconds=" << r.seconds << "\n";
    } else if (*embed) {
      wassmap::driver::cmd_embed(out_dir, embed_dim);
      std::cout << "wrote embedding.csv, eigenvalues.json, scatter.svg\n";
    } else if (*iso) {
      if (eps_opt->count() == 0 && knn_opt->count() == 0)
        throw wassmap::ConfigError("give --epsilon or --knn");
      const auto rule = eps_opt->count() ? wassmap::NeighborRule::eps(epsilon)
                                         : wassmap::NeighborRule::knn(knn);
      wassmap::driver::cmd_isomap(out_dir, rule, embed_dim, largest_component, threads);
      std::cout << "wrote isomap_embedding.csv and graph.txt\n";
    } else if (*report) {
      std::cout << wassmap::driver::cmd_report(out_dir, with_scale) << "\n";
    } else if (*run_all) {
      std::vector<std::string> configs;
      for (const auto& entry : std::filesystem::directory_iterator(configs_dir))
        if (entry.path().extension() == ".cfg") configs.push_back(entry.path().string());
      std::sort(configs.begin(), configs.end());
      if (configs.empty())
        throw wassmap::ConfigError("no *.cfg files under " + configs_dir);
      const auto r = wassmap::driver::cmd_run_all(configs, out_root, threads);
      std::cout << "executed " << r.executed << ", skipped " << r.skipped << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
