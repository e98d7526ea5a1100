#include "wassmap/measure.hpp"

#include <cmath>
#include <cstring>

namespace wassmap {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(Matrix locations, Vector weights) {
  if (locations.rows() != weights.size())
    throw DimensionMismatch("locations and weights must have equal length");
  if (locations.rows() == 0)
    throw AllZeroImage("a measure needs at least one atom");

  int kept = 0;
  for (int i = 0; i < weights.size(); ++i) {
    const double w = weights(i);
    if (w < 0.0 || !std::isfinite(w))
      throw Error("negative or non-finite weight at atom " + std::to_string(i));
    if (w > 0.0) ++kept;
  }
  if (kept == 0) throw AllZeroImage("all weights are zero");

  locations_.resize(kept, locations.cols());
  weights_.resize(kept);
  int r = 0;
  for (int i = 0; i < weights.size(); ++i) {
    if (weights(i) > 0.0) {
      locations_.row(r) = locations.row(i);
      weights_(r) = weights(i);
      ++r;
    }
  }
  // normalization is recomputed, never trusted from the caller
  weights_ /= weights_.sum();
}

std::int64_t GridImage::pixel_count() const {
  std::int64_t n = 1;
  for (int s : shape) n *= s;
  return n;
}

void GridImage::validate() const {
  if (shape.empty()) throw Error("image shape is empty");
  for (int s : shape)
    if (s <= 0) throw Error("image shape entries must be positive");
  if (pixel_count() != values.size())
    throw DimensionMismatch("value count does not match shape");
  if (origin.size() != dim() || spacing.size() != dim())
    throw DimensionMismatch("origin/spacing dimension does not match shape");
  for (int a = 0; a < dim(); ++a)
    if (!(spacing(a) > 0.0)) throw Error("spacing must be strictly positive");
}

AffineMap AffineMap::identity(int dim) {
  return {Matrix::Identity(dim, dim), Vector::Zero(dim)};
}

AffineMap AffineMap::translation(const Vector& t) {
  return {Matrix::Identity(t.size(), t.size()), t};
}

AffineMap AffineMap::scaling(const Vector& factors) {
  Matrix m = Matrix::Zero(factors.size(), factors.size());
  m.diagonal() = factors;
  return {m, Vector::Zero(factors.size())};
}

AffineMap AffineMap::rotation(double angle) {
  Matrix m(2, 2);
  const double c = std::cos(angle), s = std::sin(angle);
  m << c, -s, s, c;
  return {m, Vector::Zero(2)};
}

DiscreteMeasure image_to_measure(const GridImage& img) {
  img.validate();
  const int m = img.dim();
  const std::int64_t total = img.pixel_count();

  int positive = 0;
  for (std::int64_t n = 0; n < total; ++n) {
    const double v = img.values(n);
    if (v < 0.0 || !std::isfinite(v))
      throw Error("pixel values must be finite and nonnegative");
    if (v > 0.0) ++positive;
  }
  if (positive == 0) throw AllZeroImage("every pixel is zero");

  Matrix locations(positive, m);
  Vector weights(positive);
  std::vector<int> index(m, 0);
  int r = 0;
  for (std::int64_t n = 0; n < total; ++n) {
    if (img.values(n) > 0.0) {
      for (int a = 0; a < m; ++a)
        locations(r, a) = img.origin(a) + (index[a] + 0.5) * img.spacing(a);
      weights(r) = img.values(n);
      ++r;
    }
    // advance the row-major multi-index (last axis fastest)
    for (int a = m - 1; a >= 0; --a) {
      if (++index[a] < img.shape[a]) break;
      index[a] = 0;
    }
  }
  return DiscreteMeasure(std::move(locations), std::move(weights));
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const AffineMap& map) {
  if (map.dim() != mu.dim() || map.matrix.rows() != mu.dim() ||
      map.matrix.cols() != mu.dim())
    throw DimensionMismatch("affine map dimension does not match measure");
  Matrix moved = mu.locations() * map.matrix.transpose();
  moved.rowwise() += map.offset.transpose();
  return DiscreteMeasure(std::move(moved), mu.weights());
}

double second_moment(const DiscreteMeasure& mu) {
  double s = 0.0;
  for (int i = 0; i < mu.size(); ++i)
    s += mu.weight(i) * mu.locations().row(i).squaredNorm();
  return s;
}

double marginal_second_moment(const DiscreteMeasure& mu, int axis) {
  if (axis < 0 || axis >= mu.dim())
    throw AxisOutOfRange("axis " + std::to_string(axis) + " out of range for dim " +
                         std::to_string(mu.dim()));
  double s = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    const double x = mu.locations()(i, axis);
    s += mu.weight(i) * x * x;
  }
  return s;
}

std::uint64_t measure_digest(const DiscreteMeasure& mu) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const std::int64_t n = mu.size(), m = mu.dim();
  h = fnv1a(&n, sizeof n, h);
  h = fnv1a(&m, sizeof m, h);
  h = fnv1a(mu.locations().data(), sizeof(double) * n * m, h);
  h = fnv1a(mu.weights().data(), sizeof(double) * n, h);
  return h;
}

}  // namespace wassmap
