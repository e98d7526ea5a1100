#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include <json.hpp>

#include "wassmap/driver.hpp"
#include "wassmap/io.hpp"

using namespace wassmap;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("wassmap_driver_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

const char* kSmallTranslation =
    "name = tiny_translation\n"
    "family = translation\n"
    "mode = pushforward\n"
    "shape = disk\n"
    "center = 0 0\n"
    "radius = 1\n"
    "resolution = 16 16\n"
    "frame = -1.5 -1.5 1.5 1.5\n"
    "grid = -1 1 3 -1 1 3\n"
    "embed_dim = 2\n"
    "method = both\n";

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WASSMAP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("generate/distances/embed/report pipeline") {
  TempDir tmp;
  write_text_file(tmp.file("exp.cfg"), kSmallTranslation);
  const std::string out = tmp.file("out");

  const auto gen = driver::cmd_generate(tmp.file("exp.cfg"), out);
  CHECK(gen.count == 9);
  CHECK(fs::exists(out + "/measures_0008.json"));
  CHECK(fs::exists(out + "/truth.csv"));
  CHECK(fs::exists(out + "/pixels.csv"));

  const auto d1 = driver::cmd_distances(out, 2);
  CHECK(d1.solved == 36);
  CHECK(d1.cache_hits == 0);
  CHECK(fs::exists(out + "/distances.csv"));

  // rerun: every pair comes from the cache, no solver calls
  const auto before = solve_call_count();
  const auto d2 = driver::cmd_distances(out, 2);
  CHECK(d2.solved == 0);
  CHECK(d2.cache_hits == 36);
  CHECK(solve_call_count() == before);

  driver::cmd_embed(out, 0);
  CHECK(fs::exists(out + "/embedding.csv"));
  CHECK(fs::exists(out + "/eigenvalues.json"));
  CHECK(fs::exists(out + "/scatter.svg"));

  driver::cmd_isomap(out, NeighborRule::knn(3), 0, true, 2);
  CHECK(fs::exists(out + "/isomap_embedding.csv"));
  CHECK(fs::exists(out + "/graph.txt"));

  const auto report = nlohmann::json::parse(driver::cmd_report(out, false));
  CHECK(report["count"] == 9);
  // pushforward translates recover the grid essentially exactly
  CHECK(report["recovery"]["normalized_error"].get<double>() <= 1e-6);
  CHECK(report.contains("isomap_recovery_error"));
}

TEST_CASE("byte-identical outputs for identical configs") {
  TempDir tmp;
  write_text_file(tmp.file("exp.cfg"), kSmallTranslation);
  const std::string out1 = tmp.file("a"), out2 = tmp.file("b");
  for (const auto& out : {out1, out2}) {
    driver::cmd_generate(tmp.file("exp.cfg"), out);
    driver::cmd_distances(out, 2);
    driver::cmd_embed(out, 0);
  }
  CHECK(read_text_file(out1 + "/distances.csv") == read_text_file(out2 + "/distances.csv"));
  CHECK(read_text_file(out1 + "/embedding.csv") == read_text_file(out2 + "/embedding.csv"));
  CHECK(read_text_file(out1 + "/scatter.svg") == read_text_file(out2 + "/scatter.svg"));
  CHECK(read_text_file(out1 + "/measures_0000.json") ==
        read_text_file(out2 + "/measures_0000.json"));
}

TEST_CASE("invalid dilation parameters surface with their index") {
  TempDir tmp;
  write_text_file(tmp.file("bad.cfg"),
                  "family = dilation\nshape = disk\ncenter = 0 0\nradius = 1\n"
                  "resolution = 8 8\nframe = -1.5 -1.5 1.5 1.5\n"
                  "grid = 0 2 3 1 2 2\n");  // lo = 0 is not a valid dilation
  try {
    driver::cmd_generate(tmp.file("bad.cfg"), tmp.file("out"));
    FAIL("expected NonPositiveDilation");
  } catch (const NonPositiveDilation& e) {
    CHECK(std::string(e.what()).find("0") != std::string::npos);
  }
}

TEST_CASE("report on an empty directory lists missing artifacts") {
  TempDir tmp;
  fs::create_directories(tmp.file("empty"));
  CHECK_THROWS_AS(driver::cmd_report(tmp.file("empty"), false), MissingArtifacts);
}

TEST_CASE("checked-in configs parse") {
  int synthetic = 0;
  for (const auto& entry : fs::directory_iterator(WASSMAP_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    const Config cfg = Config::load(entry.path().string());
    if (cfg.get_string_or("dataset", "") == "mnist") {
      CHECK(cfg.has("images"));
      CHECK(cfg.has("labels"));
      CHECK(cfg.has("per_class"));
    } else {
      const ManifoldSpec spec = manifold_spec_from_config(cfg);
      CHECK(!spec.parameters.empty());
      ++synthetic;
    }
  }
  CHECK(synthetic >= 6);  // every synthetic figure experiment is covered
}

TEST_CASE("cli subcommands run end to end") {
  TempDir tmp;
  write_text_file(tmp.file("exp.cfg"), kSmallTranslation);
  const std::string out = tmp.file("cli_out");

  CHECK(run_cli("generate --config " + tmp.file("exp.cfg") + " --out " + out) == 0);
  CHECK(run_cli("distances --out " + out + " --threads 2") == 0);
  CHECK(run_cli("embed --out " + out) == 0);
  CHECK(run_cli("isomap --out " + out + " --knn 3 --largest-component") == 0);
  CHECK(run_cli("report --out " + out) == 0);
  CHECK(fs::exists(out + "/report.json"));

  // bad invocations exit nonzero
  CHECK(run_cli("generate --config /nonexistent.cfg --out " + tmp.file("x")) != 0);
  CHECK(run_cli("isomap --out " + out) != 0);  // neither --epsilon nor --knn
}
