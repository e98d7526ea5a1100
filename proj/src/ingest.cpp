#include "wassmap/ingest.hpp"

#include <algorithm>
#include <fstream>

namespace wassmap {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_u32(const std::vector<unsigned char>& buf, std::size_t at,
                       const std::string& path) {
  if (at + 4 > buf.size()) throw TruncatedFile(path + " ends inside the header");
  return (std::uint32_t(buf[at]) << 24) | (std::uint32_t(buf[at + 1]) << 16) |
         (std::uint32_t(buf[at + 2]) << 8) | std::uint32_t(buf[at + 3]);
}

void write_u32(std::ofstream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {static_cast<unsigned char>(v >> 24),
                                  static_cast<unsigned char>(v >> 16),
                                  static_cast<unsigned char>(v >> 8),
                                  static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint64_t fnv1a_bytes(const std::vector<unsigned char>& buf, std::uint64_t h) {
  for (const unsigned char c : buf) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// splitmix64: platform-independent generator for the subsampler
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // unbiased bounded draw by rejection
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }
};

}  // namespace

LabeledImageSet load_idx(const std::string& images_path, const std::string& labels_path) {
  const auto ibuf = read_file(images_path);
  const auto lbuf = read_file(labels_path);

  if (read_u32(ibuf, 0, images_path) != kImageMagic)
    throw BadMagic(images_path + ": expected image magic 0x00000803");
  if (read_u32(lbuf, 0, labels_path) != kLabelMagic)
    throw BadMagic(labels_path + ": expected label magic 0x00000801");

  const std::uint32_t n = read_u32(ibuf, 4, images_path);
  const std::uint32_t rows = read_u32(ibuf, 8, images_path);
  const std::uint32_t cols = read_u32(ibuf, 12, images_path);
  const std::uint32_t n_labels = read_u32(lbuf, 4, labels_path);
  if (n != n_labels)
    throw CountMismatch("image count " + std::to_string(n) + " != label count " +
                        std::to_string(n_labels));

  const std::size_t pixel_bytes = std::size_t(n) * rows * cols;
  if (ibuf.size() < 16 + pixel_bytes)
    throw TruncatedFile(images_path + " shorter than header claims");
  if (lbuf.size() < 8 + n)
    throw TruncatedFile(labels_path + " shorter than header claims");

  LabeledImageSet set;
  set.images.reserve(n);
  set.labels.reserve(n);
  for (std::uint32_t k = 0; k < n; ++k) {
    GridImage img;
    img.shape = {static_cast<int>(rows), static_cast<int>(cols)};
    img.origin = Vector::Zero(2);
    img.spacing = Vector::Ones(2);
    img.values.resize(std::int64_t(rows) * cols);
    const std::size_t base = 16 + std::size_t(k) * rows * cols;
    for (std::size_t p = 0; p < std::size_t(rows) * cols; ++p)
      img.values(p) = static_cast<double>(ibuf[base + p]);
    set.images.push_back(std::move(img));
    const int label = lbuf[8 + k];
    if (label < 0 || label > 9)
      throw Error("label " + std::to_string(label) + " outside 0-9 at index " +
                  std::to_string(k));
    set.labels.push_back(label);
  }
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a_bytes(ibuf, h);
  h = fnv1a_bytes(lbuf, h);
  set.source_digest = h;
  return set;
}

void write_idx(const LabeledImageSet& set, const std::string& images_path,
               const std::string& labels_path) {
  if (set.images.size() != set.labels.size())
    throw CountMismatch("images and labels differ in length");
  const std::uint32_t n = static_cast<std::uint32_t>(set.images.size());
  const int rows = n > 0 ? set.images[0].shape.at(0) : 0;
  const int cols = n > 0 ? set.images[0].shape.at(1) : 0;

  std::ofstream iout(images_path, std::ios::binary);
  if (!iout) throw IoError("cannot write " + images_path);
  write_u32(iout, kImageMagic);
  write_u32(iout, n);
  write_u32(iout, rows);
  write_u32(iout, cols);
  for (const GridImage& img : set.images) {
    if (img.shape.at(0) != rows || img.shape.at(1) != cols)
      throw ShapeMismatch("all images must share one shape");
    for (std::int64_t p = 0; p < img.values.size(); ++p) {
      const double v = img.values(p);
      if (v < 0.0 || v > 255.0) throw Error("pixel value outside byte range");
      iout.put(static_cast<char>(static_cast<unsigned char>(v)));
    }
  }

  std::ofstream lout(labels_path, std::ios::binary);
  if (!lout) throw IoError("cannot write " + labels_path);
  write_u32(lout, kLabelMagic);
  write_u32(lout, n);
  for (const int label : set.labels) lout.put(static_cast<char>(label));
}

LabeledImageSet subsample(const LabeledImageSet& set, const std::map<int, int>& per_class,
                          std::uint64_t seed) {
  LabeledImageSet out;
  SplitMix64 rng{seed ^ 0x5bf0d3a6f0c9e2b1ull};

  for (const auto& [label, want] : per_class) {
    if (want < 0) throw Error("requested count must be nonnegative");
    std::vector<int> pool;
    for (std::size_t i = 0; i < set.labels.size(); ++i)
      if (set.labels[i] == label) pool.push_back(static_cast<int>(i));
    if (static_cast<int>(pool.size()) < want)
      throw InsufficientClassSamples("class " + std::to_string(label) + " has " +
                                     std::to_string(pool.size()) + " samples, need " +
                                     std::to_string(want));
    // partial Fisher-Yates: the first `want` slots become the sample
    for (int k = 0; k < want; ++k) {
      const int swap_with = k + static_cast<int>(rng.below(pool.size() - k));
      std::swap(pool[k], pool[swap_with]);
    }
    pool.resize(want);
    std::sort(pool.begin(), pool.end());
    for (const int i : pool) {
      out.images.push_back(set.images[i]);
      out.labels.push_back(set.labels[i]);
    }
  }
  out.source_digest = set.source_digest;
  return out;
}

std::vector<DiscreteMeasure> to_measures(const LabeledImageSet& set) {
  std::vector<DiscreteMeasure> out;
  out.reserve(set.images.size());
  for (std::size_t i = 0; i < set.images.size(); ++i) {
    try {
      out.push_back(image_to_measure(set.images[i]));
    } catch (const AllZeroImage&) {
      throw AllZeroImage("image " + std::to_string(i) + " is blank");
    }
  }
  return out;
}

}  // namespace wassmap
