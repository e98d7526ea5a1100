#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wassmap/measure.hpp"

namespace wassmap {

/// MNIST-style labeled image collection. Images are 28x28 (or whatever
/// the IDX header says), unit spacing, origin (0, 0).
struct LabeledImageSet {
  std::vector<GridImage> images;
  std::vector<int> labels;
  std::uint64_t source_digest = 0;  // checksum of the input files
};

/// Parses the IDX image/label pair bit-exactly: image magic
/// 0x00000803, big-endian counts (N, rows, cols), unsigned bytes in
/// row-major order; label magic 0x00000801 and N label bytes.
LabeledImageSet load_idx(const std::string& images_path, const std::string& labels_path);

/// Writes the set back out in the same IDX layout.
void write_idx(const LabeledImageSet& set, const std::string& images_path,
               const std::string& labels_path);

/// Draws the requested number of images per class, deterministically
/// for a fixed seed. Throws InsufficientClassSamples.
LabeledImageSet subsample(const LabeledImageSet& set, const std::map<int, int>& per_class,
                          std::uint64_t seed);

/// image_to_measure per image (pixel-index coordinates, spacing 1).
/// A blank image is rejected with its index.
std::vector<DiscreteMeasure> to_measures(const LabeledImageSet& set);

}  // namespace wassmap
