#include "wassmap/driver.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <unordered_map>

#include <json.hpp>

#include "wassmap/evalign.hpp"
#include "wassmap/ingest.hpp"
#include "wassmap/io.hpp"
#include "wassmap/svg.hpp"

namespace wassmap::driver {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string measure_file(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "measures_%04d.json", index);
  return buf;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<DiscreteMeasure> load_measures(const std::string& out_dir) {
  std::vector<DiscreteMeasure> measures;
  for (int i = 0;; ++i) {
    const std::string path = join(out_dir, measure_file(i));
    if (!fs::exists(path)) break;
    measures.push_back(load_measure(path));
  }
  if (measures.size() < 2)
    throw MissingArtifacts("need at least two measures_*.json in " + out_dir);
  return measures;
}

std::vector<int> load_labels(const std::string& out_dir) {
  const std::string path = join(out_dir, "labels.csv");
  if (!fs::exists(path)) return {};
  const Matrix m = load_matrix_csv(path);
  std::vector<int> labels(m.rows());
  for (int i = 0; i < m.rows(); ++i) labels[i] = static_cast<int>(std::lround(m(i, 0)));
  return labels;
}

json load_family_meta(const std::string& out_dir) {
  const std::string path = join(out_dir, "family.json");
  if (!fs::exists(path)) return json::object();
  return json::parse(read_text_file(path));
}

GenerateResult generate_mnist(const Config& cfg, const std::string& out_dir,
                              std::optional<std::uint64_t> seed_override) {
  const std::string images_path = cfg.get_string("images");
  const std::string labels_path = cfg.get_string("labels");
  const std::uint64_t seed =
      seed_override ? *seed_override : static_cast<std::uint64_t>(cfg.get_int_or("seed", 0));

  LabeledImageSet full = load_idx(images_path, labels_path);
  const auto classes = cfg.get_ints("classes");
  const auto counts = cfg.get_ints("per_class");
  if (classes.size() != counts.size())
    throw ConfigError("classes and per_class must have equal lengths");
  std::map<int, int> per_class;
  for (std::size_t i = 0; i < classes.size(); ++i) per_class[classes[i]] = counts[i];

  const LabeledImageSet sample = subsample(full, per_class, seed);
  const std::vector<DiscreteMeasure> measures = to_measures(sample);

  for (std::size_t i = 0; i < measures.size(); ++i)
    save_measure(measures[i], join(out_dir, measure_file(static_cast<int>(i))));

  Matrix labels(sample.labels.size(), 1);
  for (std::size_t i = 0; i < sample.labels.size(); ++i) labels(i, 0) = sample.labels[i];
  save_matrix_csv(labels, join(out_dir, "labels.csv"));

  // raw pixel intensities for the ISOMAP baseline
  Matrix pixels(sample.images.size(), sample.images[0].values.size());
  for (std::size_t i = 0; i < sample.images.size(); ++i)
    pixels.row(i) = sample.images[i].values.transpose();
  save_matrix_csv(pixels, join(out_dir, "pixels.csv"));

  json meta;
  meta["name"] = cfg.get_string_or("name", "mnist");
  meta["kind"] = "mnist";
  meta["count"] = measures.size();
  meta["seed"] = seed;
  meta["source_digest"] = sample.source_digest;
  meta["embed_dim"] = cfg.get_int_or("embed_dim", 2);
  write_text_file(join(out_dir, "family.json"), meta.dump(2));
  return {static_cast<int>(measures.size()), meta["name"].get<std::string>()};
}

}  // namespace

GenerateResult cmd_generate(const std::string& config_path, const std::string& out_dir,
                            std::optional<std::uint64_t> seed_override,
                            std::optional<std::string> mode_override) {
  const Config cfg = Config::load(config_path);
  fs::create_directories(out_dir);

  if (cfg.get_string_or("dataset", "") == "mnist")
    return generate_mnist(cfg, out_dir, seed_override);

  Config effective = cfg;
  ManifoldSpec spec = manifold_spec_from_config(cfg);
  if (mode_override) {
    if (*mode_override == "pushforward")
      spec.mode = ManifoldSpec::Mode::pushforward;
    else if (*mode_override == "raster")
      spec.mode = ManifoldSpec::Mode::raster;
    else
      throw ConfigError("mode must be pushforward or raster");
    spec.validate();
  }

  const FamilyResult family = generate_family(spec);
  for (std::size_t i = 0; i < family.measures.size(); ++i)
    save_measure(family.measures[i], join(out_dir, measure_file(static_cast<int>(i))));
  save_matrix_csv(family.truth, join(out_dir, "truth.csv"));

  if (cfg.get_string_or("method", "both") != "wassmap") {
    const Matrix pixels =
        family_pixel_matrix(family.measures, spec.frame, spec.resolution);
    save_matrix_csv(pixels, join(out_dir, "pixels.csv"));
  }

  json meta;
  meta["name"] = cfg.get_string_or("name", fs::path(config_path).stem().string());
  meta["kind"] = cfg.get_string("family");
  meta["mode"] = spec.mode == ManifoldSpec::Mode::pushforward ? "pushforward" : "raster";
  meta["count"] = family.measures.size();
  meta["embed_dim"] = cfg.get_int_or("embed_dim", 2);
  meta["with_scale"] = cfg.get_int_or("with_scale", 0) != 0;
  write_text_file(join(out_dir, "family.json"), meta.dump(2));
  return {static_cast<int>(family.measures.size()), meta["name"].get<std::string>()};
}

DistanceResult cmd_distances(const std::string& out_dir, int threads) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<DiscreteMeasure> measures = load_measures(out_dir);

  // content-digest cache: reruns after embedding-stage changes skip
  // every solved pair
  std::vector<std::string> digests(measures.size());
  for (std::size_t i = 0; i < measures.size(); ++i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(measure_digest(measures[i])));
    digests[i] = buf;
  }

  std::unordered_map<std::string, double> cache_map;
  const std::string cache_path = join(out_dir, "w2cache.json");
  if (fs::exists(cache_path)) {
    const json doc = json::parse(read_text_file(cache_path));
    for (const auto& [key, value] : doc.items())
      cache_map[key] = value.get<double>();
  }

  std::mutex cache_mutex;
  PairwiseCache cache;
  cache.lookup = [&](int i, int j, double& cost) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    const auto it = cache_map.find(digests[i] + ":" + digests[j]);
    if (it == cache_map.end()) return false;
    cost = it->second;
    return true;
  };
  cache.store = [&](int i, int j, double cost) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache_map[digests[i] + ":" + digests[j]] = cost;
  };

  PairwiseStats stats;
  const SquaredDistanceMatrix w = pairwise_w2_squared_cached(measures, cache, stats, threads);

  save_matrix_csv(w.entries, join(out_dir, "distances.csv"));

  json cache_doc(cache_map);
  write_text_file(cache_path, cache_doc.dump());

  DistanceResult result{stats.solved, stats.cache_hits, seconds_since(start)};
  json envelope = json::parse(distance_envelope_json(w, "distances.csv"));
  envelope["seconds"] = result.seconds;
  envelope["solved"] = result.solved;
  envelope["cache_hits"] = result.cache_hits;
  write_text_file(join(out_dir, "distances.json"), envelope.dump(2));
  return result;
}

void cmd_embed(const std::string& out_dir, int embed_dim) {
  const std::string dist_path = join(out_dir, "distances.csv");
  if (!fs::exists(dist_path))
    throw MissingArtifacts("distances.csv missing in " + out_dir + "; run distances first");

  const json meta = load_family_meta(out_dir);
  const int d = embed_dim > 0 ? embed_dim : meta.value("embed_dim", 2);

  SquaredDistanceMatrix w;
  w.entries = load_matrix_csv(dist_path);
  w.validate(false);
  const Embedding embedding = classical_mds(w, d);

  save_matrix_csv(embedding.points, join(out_dir, "embedding.csv"));
  write_text_file(join(out_dir, "eigenvalues.json"), embedding_diagnostics_json(embedding));

  const std::vector<int> labels = load_labels(out_dir);
  Matrix overlay;
  const std::string truth_path = join(out_dir, "truth.csv");
  if (fs::exists(truth_path) && d >= 2) {
    const Matrix truth = load_matrix_csv(truth_path);
    if (truth.cols() == d && truth.rows() == embedding.points.rows())
      overlay = procrustes(truth, embedding.points, true).apply(truth);
  }
  if (d >= 2)
    save_scatter_svg(join(out_dir, "scatter.svg"), embedding.points, labels, overlay,
                     meta.value("name", std::string()));
}

void cmd_isomap(const std::string& out_dir, const NeighborRule& rule, int embed_dim,
                bool largest_component_only, int threads) {
  const std::string pixels_path = join(out_dir, "pixels.csv");
  if (!fs::exists(pixels_path))
    throw MissingArtifacts("pixels.csv missing in " + out_dir +
                           "; generate with method=both or method=isomap");
  const Matrix vectors = load_matrix_csv(pixels_path);

  const json meta = load_family_meta(out_dir);
  const int d = embed_dim > 0 ? embed_dim : meta.value("embed_dim", 2);

  const NeighborGraph graph = build_graph(vectors, rule);
  write_text_file(join(out_dir, "graph.txt"), graph_to_edge_list(graph));

  const IsomapResult result = isomap(vectors, rule, d, largest_component_only, threads);
  save_matrix_csv(result.embedding.points, join(out_dir, "isomap_embedding.csv"));
  write_text_file(join(out_dir, "isomap_eigenvalues.json"),
                  embedding_diagnostics_json(result.embedding));
  json kept;
  kept["kept"] = result.kept;
  kept["dropped"] = result.dropped;
  write_text_file(join(out_dir, "isomap_kept.json"), kept.dump());

  std::vector<int> labels = load_labels(out_dir);
  if (!labels.empty()) {
    std::vector<int> sub;
    for (const int i : result.kept) sub.push_back(labels[i]);
    labels = std::move(sub);
  }
  if (d >= 2)
    save_scatter_svg(join(out_dir, "isomap_scatter.svg"), result.embedding.points, labels,
                     Matrix(), meta.value("name", std::string()) + " (isomap)");
}

std::string cmd_report(const std::string& out_dir, bool with_scale) {
  const json meta = load_family_meta(out_dir);
  std::vector<std::string> missing;
  const std::string embedding_path = join(out_dir, "embedding.csv");
  if (!fs::exists(embedding_path)) missing.push_back("embedding.csv");
  if (!fs::exists(join(out_dir, "eigenvalues.json"))) missing.push_back("eigenvalues.json");
  if (!missing.empty()) {
    std::string msg = "missing artifacts in " + out_dir + ":";
    for (const auto& f : missing) msg += " " + f;
    throw MissingArtifacts(msg);
  }

  json report;
  report["name"] = meta.value("name", std::string());
  const Matrix points = load_matrix_csv(embedding_path);
  report["count"] = points.rows();
  report["spectrum"] = json::parse(read_text_file(join(out_dir, "eigenvalues.json")));

  const bool scale_flag = with_scale || meta.value("with_scale", false);
  if (fs::exists(join(out_dir, "truth.csv"))) {
    const Matrix truth = load_matrix_csv(join(out_dir, "truth.csv"));
    if (truth.rows() == points.rows() && truth.cols() == points.cols()) {
      const RigidAlignment fit = procrustes(points, truth, scale_flag);
      const double err = recovery_error(points, truth, scale_flag);
      report["recovery"] = json::parse(alignment_to_json(fit, err));
      if (fs::exists(join(out_dir, "isomap_embedding.csv"))) {
        const Matrix ipts = load_matrix_csv(join(out_dir, "isomap_embedding.csv"));
        const json kept = json::parse(read_text_file(join(out_dir, "isomap_kept.json")));
        Matrix sub_truth(ipts.rows(), truth.cols());
        const auto kept_list = kept.at("kept").get<std::vector<int>>();
        if (static_cast<int>(kept_list.size()) == ipts.rows() &&
            ipts.cols() == truth.cols()) {
          for (std::size_t r = 0; r < kept_list.size(); ++r)
            sub_truth.row(r) = truth.row(kept_list[r]);
          report["isomap_recovery_error"] =
              recovery_error(ipts, sub_truth, scale_flag);
        }
      }
    }
  }

  const std::vector<int> labels = load_labels(out_dir);
  if (!labels.empty()) {
    report["knn_separation"] = knn_separation(points, labels, 1);
  }
  if (fs::exists(join(out_dir, "distances.json"))) {
    const json denv = json::parse(read_text_file(join(out_dir, "distances.json")));
    report["runtimes"]["distances_seconds"] = denv.value("seconds", 0.0);
    report["solved"] = denv.value("solved", 0);
    report["cache_hits"] = denv.value("cache_hits", 0);
  }

  const std::string text = report.dump(2);
  write_text_file(join(out_dir, "report.json"), text);

  std::string human = "experiment: " + report["name"].get<std::string>() + "\n";
  human += "measures: " + std::to_string(points.rows()) + "\n";
  if (report.contains("recovery"))
    human += "normalized recovery error: " +
             format_double(report["recovery"]["normalized_error"].get<double>()) + "\n";
  if (report.contains("isomap_recovery_error"))
    human += "isomap recovery error: " +
             format_double(report["isomap_recovery_error"].get<double>()) + "\n";
  if (report.contains("knn_separation"))
    human += "1-NN separation: " + format_double(report["knn_separation"].get<double>()) +
             "\n";
  if (report.contains("runtimes"))
    human += "distances seconds: " +
             format_double(report["runtimes"]["distances_seconds"].get<double>()) + "\n";
  write_text_file(join(out_dir, "report.txt"), human);
  return text;
}

RunAllResult cmd_run_all(const std::vector<std::string>& config_paths,
                         const std::string& out_root, int threads) {
  RunAllResult result;
  for (const std::string& config_path : config_paths) {
    const Config cfg = Config::load(config_path);
    const std::string name = cfg.get_string_or("name", fs::path(config_path).stem().string());
    const std::string out_dir = join(out_root, name);

    if (cfg.get_string_or("dataset", "") == "mnist") {
      const std::string images = cfg.get_string("images");
      const std::string labels = cfg.get_string("labels");
      if (!fs::exists(images) || !fs::exists(labels)) {
        std::cout << "SKIPPED " << name << " (dataset files not found: " << images << ")\n";
        ++result.skipped;
        continue;
      }
    }

    std::cout << "== " << name << " ==\n";
    cmd_generate(config_path, out_dir);
    const DistanceResult d = cmd_distances(out_dir, threads);
    std::cout << "distances: solved=" << d.solved << " cache_hits=" << d.cache_hits
              << " seconds=" << d.seconds << "\n";
    cmd_embed(out_dir, 0);

    const std::string method = cfg.get_string_or("method", "both");
    if (method != "wassmap") {
      std::vector<double> eps_list;
      if (cfg.has("epsilon_list"))
        eps_list = cfg.get_doubles("epsilon_list");
      else if (cfg.has("epsilon"))
        eps_list = {cfg.get_double("epsilon")};
      try {
        if (!eps_list.empty()) {
          for (std::size_t e = 0; e < eps_list.size(); ++e) {
            cmd_isomap(out_dir, NeighborRule::eps(eps_list[e]), 0, true, threads);
            // keep each epsilon's embedding distinguishable
            fs::copy_file(join(out_dir, "isomap_embedding.csv"),
                          join(out_dir, "isomap_embedding_eps" + std::to_string(e) + ".csv"),
                          fs::copy_options::overwrite_existing);
          }
        } else {
          cmd_isomap(out_dir, NeighborRule::knn(cfg.get_int_or("knn", 6)), 0, false,
                     threads);
        }
      } catch (const DisconnectedGraph& e) {
        std::cout << "isomap baseline failed: " << e.what() << "\n";
      }
    }
    cmd_report(out_dir, false);
    ++result.executed;
  }
  return result;
}

}  // namespace wassmap::driver
