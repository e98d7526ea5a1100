#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "support/generators.hpp"
#include "wassmap/embedding.hpp"
#include "wassmap/evalign.hpp"

using namespace wassmap;

namespace {

SquaredDistanceMatrix squared_distances(const Matrix& points) {
  const int n = static_cast<int>(points.rows());
  SquaredDistanceMatrix w;
  w.entries = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = (points.row(i) - points.row(j)).squaredNorm();
      w.entries(i, j) = d;
      w.entries(j, i) = d;
    }
  return w;
}

}  // namespace

TEST_CASE("double centering hand values") {
  SUBCASE("zero matrix stays zero") {
    SquaredDistanceMatrix w;
    w.entries = Matrix::Zero(3, 3);
    CHECK(double_center(w).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("two points at distance 2") {
    SquaredDistanceMatrix w;
    w.entries = Matrix::Zero(2, 2);
    w.entries(0, 1) = w.entries(1, 0) = 4.0;
    const Matrix b = double_center(w);
    CHECK(b(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(b(1, 0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(b(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("row sums vanish for any input") {
    std::mt19937 rng(3);
    const auto w = squared_distances(testsupport::random_points(rng, 9, 3));
    const Matrix b = double_center(w);
    CHECK(b.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((b - b.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("two points embed to minus one and plus one") {
  SquaredDistanceMatrix w;
  w.entries = Matrix::Zero(2, 2);
  w.entries(0, 1) = w.entries(1, 0) = 4.0;
  const Embedding e = classical_mds(w, 1);
  CHECK(std::abs(e.points(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.points(0, 0) == doctest::Approx(-e.points(1, 0)).epsilon(1e-12));
  CHECK(e.eigenvalues(0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("unit square corners are recovered rigidly") {
  Matrix corners(4, 2);
  corners << 0, 0, 1, 0, 1, 1, 0, 1;
  const Embedding e = classical_mds(squared_distances(corners), 2);
  CHECK(procrustes(e.points, corners).rmse <= 1e-8);
}

TEST_CASE("all-zero distances collapse to the origin") {
  SquaredDistanceMatrix w;
  w.entries = Matrix::Zero(4, 4);
  const Embedding e = classical_mds(w, 2);
  CHECK(e.points.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("dimension bound is enforced") {
  SquaredDistanceMatrix w;
  w.entries = Matrix::Zero(3, 3);
  CHECK_THROWS_AS(classical_mds(w, 3), DimensionTooLarge);
  CHECK_THROWS(classical_mds(w, 0));
}

TEST_CASE("random configurations round-trip through MDS") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 4;
    const int n = d + 2 + trial % 40;
    const Matrix x = testsupport::random_points(rng, n, d, 2.0);
    const Embedding e = classical_mds(squared_distances(x), d);
    CHECK(procrustes(e.points, x).rmse <= 1e-8);

    // embedding invariants
    for (int c = 0; c < d; ++c)
      CHECK(e.points.col(c).squaredNorm() ==
            doctest::Approx(e.eigenvalues(c)).epsilon(1e-8));
    CHECK(e.points.colwise().mean().cwiseAbs().maxCoeff() <= 1e-8);
    for (int c = 1; c < d; ++c) CHECK(e.eigenvalues(c) <= e.eigenvalues(c - 1));
  }
}

TEST_CASE("spectrum beyond the intrinsic dimension is negligible") {
  std::mt19937 rng(11);
  const int d = 3;
  const Matrix x = testsupport::random_points(rng, 20, d, 1.5);
  const Embedding e = classical_mds(squared_distances(x), 5);
  CHECK(std::abs(e.raw_top(3)) <= 1e-8 * e.eigenvalues(0));
  CHECK(std::abs(e.raw_top(4)) <= 1e-8 * e.eigenvalues(0));
  CHECK(std::abs(e.discarded_top) <= 1e-8 * e.eigenvalues(0));
}

TEST_CASE("embedding distances reproduce the input when B is PSD") {
  std::mt19937 rng(13);
  const Matrix x = testsupport::random_points(rng, 12, 2, 3.0);
  const auto w = squared_distances(x);
  const Embedding e = classical_mds(w, 2);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) {
      const double embedded = (e.points.row(i) - e.points.row(j)).norm();
      const double expected = std::sqrt(w.entries(i, j));
      CHECK(embedded == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("permuting inputs permutes outputs within the rigid class") {
  std::mt19937 rng(17);
  const Matrix x = testsupport::random_points(rng, 10, 2);
  const auto w = squared_distances(x);

  std::vector<int> perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  SquaredDistanceMatrix wp;
  wp.entries = Matrix::Zero(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) wp.entries(i, j) = w.entries(perm[i], perm[j]);

  const Embedding original = classical_mds(w, 2);
  const Embedding permuted = classical_mds(wp, 2);
  Matrix expected(10, 2);
  for (int i = 0; i < 10; ++i) expected.row(i) = original.points.row(perm[i]);
  CHECK(procrustes(permuted.points, expected).rmse <= 1e-8);
}

TEST_CASE("negative spectrum is clamped and reported") {
  // a non-Euclidean distance matrix: triangle-violating entries
  SquaredDistanceMatrix w;
  w.entries = Matrix::Zero(3, 3);
  w.entries(0, 1) = w.entries(1, 0) = 1.0;
  w.entries(1, 2) = w.entries(2, 1) = 1.0;
  w.entries(0, 2) = w.entries(2, 0) = 9.0;
  const Embedding e = classical_mds(w, 2);
  CHECK(e.clamped_count >= 1);
  CHECK(e.eigenvalues.minCoeff() >= 0.0);
}

TEST_CASE("determinism of the embedding") {
  std::mt19937 rng(19);
  const Matrix x = testsupport::random_points(rng, 14, 3);
  const auto w = squared_distances(x);
  const Embedding a = classical_mds(w, 3);
  const Embedding b = classical_mds(w, 3);
  CHECK((a.points - b.points).cwiseAbs().maxCoeff() == 0.0);
}
