#include "wassmap/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wassmap {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string measure_to_json(const DiscreteMeasure& mu) {
  json doc;
  doc["dim"] = mu.dim();
  json atoms = json::array();
  for (int i = 0; i < mu.size(); ++i) {
    json atom = json::array();
    for (int a = 0; a < mu.dim(); ++a) atom.push_back(mu.locations()(i, a));
    atom.push_back(mu.weight(i));
    atoms.push_back(std::move(atom));
  }
  doc["atoms"] = std::move(atoms);
  return doc.dump();
}

DiscreteMeasure measure_from_json(const std::string& text) {
  const json doc = json::parse(text);
  const int m = doc.at("dim").get<int>();
  const auto& atoms = doc.at("atoms");
  if (!atoms.is_array() || atoms.empty()) throw IoError("measure document has no atoms");
  Matrix locations(atoms.size(), m);
  Vector weights(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& atom = atoms[i];
    if (static_cast<int>(atom.size()) != m + 1)
      throw IoError("atom " + std::to_string(i) + " has wrong arity");
    for (int a = 0; a < m; ++a) locations(i, a) = atom[a].get<double>();
    weights(i) = atom[m].get<double>();
  }
  return DiscreteMeasure(std::move(locations), std::move(weights));
}

void save_measure(const DiscreteMeasure& mu, const std::string& path) {
  write_text_file(path, measure_to_json(mu));
}

DiscreteMeasure load_measure(const std::string& path) {
  return measure_from_json(read_text_file(path));
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.size()) * 20);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Matrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = line.find(',', pos);
      const std::string cell =
          line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("bad CSV cell '" + cell + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows[0].size())
      throw IoError("ragged CSV rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty CSV");
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void save_matrix_csv(const Matrix& m, const std::string& path) {
  write_text_file(path, matrix_to_csv(m));
}

Matrix load_matrix_csv(const std::string& path) {
  return matrix_from_csv(read_text_file(path));
}

std::string distance_envelope_json(const SquaredDistanceMatrix& w,
                                   const std::string& csv_name) {
  json doc;
  doc["n"] = w.size();
  doc["kind"] = "w2_squared";
  doc["csv"] = csv_name;
  return doc.dump();
}

std::string embedding_diagnostics_json(const Embedding& e) {
  json doc;
  doc["eigenvalues"] = std::vector<double>(e.eigenvalues.data(),
                                           e.eigenvalues.data() + e.eigenvalues.size());
  doc["raw_eigenvalues"] =
      std::vector<double>(e.raw_top.data(), e.raw_top.data() + e.raw_top.size());
  doc["discarded_top"] = e.discarded_top;
  doc["clamped_count"] = e.clamped_count;
  return doc.dump();
}

std::string alignment_to_json(const RigidAlignment& a, double normalized_error) {
  json doc;
  json rot = json::array();
  for (Eigen::Index i = 0; i < a.rotation.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.rotation.cols(); ++j) row.push_back(a.rotation(i, j));
    rot.push_back(std::move(row));
  }
  doc["rotation"] = std::move(rot);
  doc["translation"] = std::vector<double>(a.translation.data(),
                                           a.translation.data() + a.translation.size());
  doc["scale"] = a.scale;
  doc["rmse"] = a.rmse;
  doc["normalized_error"] = normalized_error;
  return doc.dump();
}

std::string graph_to_edge_list(const NeighborGraph& g) {
  std::string out;
  for (const auto& e : g.edges)
    out += std::to_string(e.i) + " " + std::to_string(e.j) + " " + format_double(e.weight) +
           "\n";
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace wassmap
