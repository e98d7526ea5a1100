#include "wassmap/config.hpp"

#include <cmath>
#include <sstream>

#include "wassmap/io.hpp"

namespace wassmap {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (cfg.values_.count(key))
      throw ConfigError("duplicate key '" + key + "' at line " + std::to_string(line_no));
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  try {
    return parse(read_text_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

std::string Config::get_string_or(const std::string& key,
                                  const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  const auto doubles = get_doubles(key);
  if (doubles.size() != 1) throw ConfigError("key '" + key + "' wants one number");
  return doubles[0];
}

int Config::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(std::lround(v));
  if (v != i) throw ConfigError("key '" + key + "' wants an integer");
  return i;
}

int Config::get_int_or(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': bad number '" + tok + "'");
    }
  }
  if (out.empty()) throw ConfigError("key '" + key + "' has no numbers");
  return out;
}

std::vector<int> Config::get_ints(const std::string& key) const {
  std::vector<int> out;
  for (const double v : get_doubles(key)) {
    const int i = static_cast<int>(std::lround(v));
    if (v != i) throw ConfigError("key '" + key + "' wants integers");
    out.push_back(i);
  }
  return out;
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

namespace {

Vector to_vector(const std::vector<double>& v) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

ShapeSpec shape_from_config(const Config& cfg) {
  ShapeSpec shape;
  const std::string kind = cfg.get_string("shape");
  if (kind == "disk") {
    shape.kind = ShapeSpec::Kind::disk;
    shape.center = to_vector(cfg.get_doubles("center"));
    shape.radii = Vector::Constant(1, cfg.get_double("radius"));
  } else if (kind == "ellipse") {
    shape.kind = ShapeSpec::Kind::ellipse;
    shape.center = to_vector(cfg.get_doubles("center"));
    shape.radii = to_vector(cfg.get_doubles("radii"));
  } else if (kind == "rectangle") {
    shape.kind = ShapeSpec::Kind::rectangle;
    shape.lo = to_vector(cfg.get_doubles("rect_lo"));
    shape.hi = to_vector(cfg.get_doubles("rect_hi"));
  } else if (kind == "annulus") {
    shape.kind = ShapeSpec::Kind::annulus;
    shape.center = to_vector(cfg.get_doubles("center"));
    shape.radii = to_vector(cfg.get_doubles("radii"));
    shape.inner_radii = to_vector(cfg.get_doubles("inner_radii"));
  } else {
    throw ConfigError("unknown shape '" + kind + "'");
  }
  return shape;
}

// grid value: per-axis (lo hi count) triples
std::vector<Vector> grid_piece(const std::vector<double>& spec) {
  if (spec.size() % 3 != 0 || spec.empty())
    throw ConfigError("grid wants (lo hi count) per axis");
  const int m = static_cast<int>(spec.size() / 3);
  Vector lo(m), hi(m);
  std::vector<int> counts(m);
  for (int a = 0; a < m; ++a) {
    lo(a) = spec[3 * a];
    hi(a) = spec[3 * a + 1];
    counts[a] = static_cast<int>(std::lround(spec[3 * a + 2]));
    if (counts[a] < 1) throw ConfigError("grid counts must be >= 1");
  }
  return parameter_grid(lo, hi, counts);
}

}  // namespace

ManifoldSpec manifold_spec_from_config(const Config& cfg) {
  ManifoldSpec spec;
  spec.base = shape_from_config(cfg);

  const std::string family = cfg.get_string("family");
  if (family == "translation")
    spec.family = ManifoldSpec::Family::translation;
  else if (family == "dilation")
    spec.family = ManifoldSpec::Family::dilation;
  else if (family == "rotation")
    spec.family = ManifoldSpec::Family::rotation;
  else if (family == "grid_deformation")
    spec.family = ManifoldSpec::Family::grid_deformation;
  else
    throw ConfigError("unknown family '" + family + "'");

  const std::string mode = cfg.get_string_or("mode", "pushforward");
  if (mode == "pushforward")
    spec.mode = ManifoldSpec::Mode::pushforward;
  else if (mode == "raster")
    spec.mode = ManifoldSpec::Mode::raster;
  else
    throw ConfigError("unknown mode '" + mode + "'");

  spec.resolution = cfg.get_ints("resolution");
  const auto frame = cfg.get_doubles("frame");
  if (frame.size() != 2 * spec.resolution.size())
    throw ConfigError("frame wants lo then hi per axis");
  const int m = static_cast<int>(spec.resolution.size());
  spec.frame.lo.resize(m);
  spec.frame.hi.resize(m);
  for (int a = 0; a < m; ++a) {
    spec.frame.lo(a) = frame[a];
    spec.frame.hi(a) = frame[m + a];
  }

  if (spec.family == ManifoldSpec::Family::rotation && cfg.has("angles")) {
    const int count = cfg.get_int("angles");
    if (count < 1) throw ConfigError("angles must be >= 1");
    for (int k = 0; k < count; ++k)
      spec.parameters.push_back(Vector::Constant(1, 2.0 * M_PI * k / count));
  } else {
    for (int piece = 1;; ++piece) {
      const std::string key = piece == 1 ? "grid" : "grid" + std::to_string(piece);
      if (!cfg.has(key)) break;
      for (Vector& p : grid_piece(cfg.get_doubles(key)))
        spec.parameters.push_back(std::move(p));
    }
    if (spec.parameters.empty())
      throw ConfigError("no parameters: give 'grid' (or 'angles' for rotations)");
  }
  spec.validate();
  return spec;
}

}  // namespace wassmap
