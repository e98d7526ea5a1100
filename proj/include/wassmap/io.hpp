#pragma once

#include <string>

#include "wassmap/embedding.hpp"
#include "wassmap/evalign.hpp"
#include "wassmap/isomap.hpp"
#include "wassmap/measure.hpp"
#include "wassmap/transport.hpp"

namespace wassmap {

/// Measure document: {"dim": m, "atoms": [[x..., w], ...]}
std::string measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const std::string& text);
void save_measure(const DiscreteMeasure& mu, const std::string& path);
DiscreteMeasure load_measure(const std::string& path);

/// Dense matrix as CSV, one row per line, 17 significant digits.
std::string matrix_to_csv(const Matrix& m);
Matrix matrix_from_csv(const std::string& text);
void save_matrix_csv(const Matrix& m, const std::string& path);
Matrix load_matrix_csv(const std::string& path);

/// JSON envelope accompanying a distance-matrix CSV:
/// {"n": N, "kind": "w2_squared", "csv": "<filename>"}
std::string distance_envelope_json(const SquaredDistanceMatrix& w,
                                   const std::string& csv_name);

/// Embedding sidecar with the eigenvalue diagnostics.
std::string embedding_diagnostics_json(const Embedding& e);

/// Alignment report:
/// {rotation, translation, scale, rmse, normalized_error}
std::string alignment_to_json(const RigidAlignment& a, double normalized_error);

/// Edge-list text, "i j weight" per line.
std::string graph_to_edge_list(const NeighborGraph& g);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Prints a double with enough digits to round-trip (17 significant).
std::string format_double(double v);

}  // namespace wassmap
