#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support/generators.hpp"
#include "support/lp_oracle.hpp"
#include "wassmap/synth.hpp"
#include "wassmap/transport.hpp"

using namespace wassmap;

namespace {

DiscreteMeasure delta_at(double x, double y) {
  Matrix loc(1, 2);
  loc << x, y;
  return DiscreteMeasure(loc, Vector::Ones(1));
}

void check_plan_feasible(const TransportPlan& plan, const DiscreteMeasure& mu,
                         const DiscreteMeasure& nu) {
  const Vector rows = plan.row_sums();
  const Vector cols = plan.col_sums();
  CHECK((rows - mu.weights()).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((cols - nu.weights()).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(static_cast<int>(plan.entries.size()) <= mu.size() + nu.size() - 1);
  CHECK(plan.cost >= 0.0);
  for (const auto& e : plan.entries) CHECK(e.mass > 0.0);
}

void check_duality(const TransportPlan& plan, const DiscreteMeasure& mu,
                   const DiscreteMeasure& nu) {
  // dual feasibility within 1e-8
  for (int i = 0; i < mu.size(); ++i)
    for (int j = 0; j < nu.size(); ++j) {
      const double c = (mu.locations().row(i) - nu.locations().row(j)).squaredNorm();
      CHECK(plan.source_potential(i) + plan.target_potential(j) <= c + 1e-8);
    }
  // strong duality within 1e-7 relative
  const double dual = plan.source_potential.dot(mu.weights()) +
                      plan.target_potential.dot(nu.weights());
  CHECK(std::abs(dual - plan.cost) <= 1e-7 * std::max(1.0, std::abs(plan.cost)));
}

DiscreteMeasure rectangle_raster(int res) {
  ShapeSpec rect;
  rect.kind = ShapeSpec::Kind::rectangle;
  rect.lo = Vector(2);
  rect.hi = Vector(2);
  rect.lo << 1.0, -1.0;
  rect.hi << 2.0, 3.0;
  Frame frame{rect.lo, rect.hi};
  return base_measure(rect, {res, res}, frame);
}

}  // namespace

TEST_CASE("single-atom transport is forced") {
  const auto plan = solve_w2(delta_at(0, 0), delta_at(3, 4));
  CHECK(plan.cost == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(w2(delta_at(0, 0), delta_at(3, 4)) == doctest::Approx(5.0).epsilon(1e-12));
  REQUIRE(plan.entries.size() == 1);
  CHECK(plan.entries[0].mass == doctest::Approx(1.0));
}

TEST_CASE("two-atom translate pair hits |theta|^2") {
  Matrix loc(2, 2);
  loc << 0, 0, 1, 0;
  const DiscreteMeasure mu(loc, Vector::Constant(2, 0.5));
  Vector shift(2);
  shift << 2, 3;
  const auto nu = pushforward(mu, AffineMap::translation(shift));
  const auto plan = solve_w2(mu, nu);
  CHECK(plan.cost == doctest::Approx(13.0).epsilon(1e-12));
  check_plan_feasible(plan, mu, nu);
  check_duality(plan, mu, nu);
}

TEST_CASE("permutation oracle") {
  std::mt19937 rng(17);

  SUBCASE("n = 1 is the squared distance") {
    const auto mu = delta_at(1, 1);
    const auto nu = delta_at(4, 5);
    CHECK(permutation_oracle(mu, nu) == doctest::Approx(25.0));
  }
  SUBCASE("square corners prefer the non-crossing matching") {
    Matrix src(2, 2), dst(2, 2);
    src << 0, 0, 1, 0;  // bottom edge
    dst << 0, 1, 1, 1;  // top edge
    const DiscreteMeasure mu(src, Vector::Constant(2, 0.5));
    const DiscreteMeasure nu(dst, Vector::Constant(2, 0.5));
    // straight up: cost 1; crossing: cost 2
    CHECK(permutation_oracle(mu, nu) == doctest::Approx(1.0));
  }
  SUBCASE("rejects unsupported instances") {
    const auto mu = testsupport::random_measure(rng, 9, 2, true);
    const auto nu = testsupport::random_measure(rng, 9, 2, true);
    CHECK_THROWS_AS(permutation_oracle(mu, nu), UnsupportedInstance);
    const auto skew = testsupport::random_measure(rng, 4, 2, false);
    const auto uni = testsupport::random_measure(rng, 4, 2, true);
    CHECK_THROWS_AS(permutation_oracle(skew, uni), UnsupportedInstance);
  }
  SUBCASE("matches the exact solver on random instances") {
    for (int trial = 0; trial < 60; ++trial) {
      const int n = 2 + trial % 5;  // up to 6
      const auto mu = testsupport::random_measure(rng, n, 2, true);
      const auto nu = testsupport::random_measure(rng, n, 2, true);
      const auto plan = solve_w2(mu, nu);
      CHECK(plan.cost == doctest::Approx(permutation_oracle(mu, nu)).epsilon(1e-9));
      check_duality(plan, mu, nu);
    }
  }
}

TEST_CASE("unequal-size unequal-weight instances match an independent dense LP") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int n1 = 2 + trial % 6, n2 = 2 + (trial * 7) % 6;
    const auto mu = testsupport::random_measure(rng, n1, 2);
    const auto nu = testsupport::random_measure(rng, n2, 2);
    const auto plan = solve_w2(mu, nu);
    const double oracle = testsupport::lp_transport_cost(mu, nu);
    CHECK(plan.cost == doctest::Approx(oracle).epsilon(1e-9));
    check_plan_feasible(plan, mu, nu);
    check_duality(plan, mu, nu);
  }
  SUBCASE("a 5 vs 7 atom pair specifically") {
    const auto mu = testsupport::random_measure(rng, 5, 2);
    const auto nu = testsupport::random_measure(rng, 7, 2);
    CHECK(solve_w2(mu, nu).cost ==
          doctest::Approx(testsupport::lp_transport_cost(mu, nu)).epsilon(1e-9));
  }
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = testsupport::random_measure(rng, 4 + trial % 5, 2);
    const auto b = testsupport::random_measure(rng, 3 + trial % 6, 2);
    const auto c = testsupport::random_measure(rng, 5, 2);
    const double ab = w2(a, b), ba = w2(b, a);
    const double bc = w2(b, c), ac = w2(a, c);
    CHECK(std::abs(ab - ba) <= 1e-9);
    CHECK(ac <= ab + bc + 1e-7);
    CHECK(w2(a, a) <= 1e-12);
  }
}

TEST_CASE("identity of indiscernibles") {
  std::mt19937 rng(31);
  const auto mu = testsupport::random_measure(rng, 8, 2);
  CHECK(w2(mu, mu) == 0.0);
  // nudging one atom produces strictly positive distance
  Matrix moved = mu.locations();
  moved(3, 0) += 0.25;
  const DiscreteMeasure nu(moved, mu.weights());
  CHECK(w2(mu, nu) > 1e-3);
}

TEST_CASE("translation laws") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mu = testsupport::random_measure(rng, 10, 2);
    const auto nu = testsupport::random_measure(rng, 7, 2);
    const Vector theta = testsupport::random_vector(rng, 2, 2.0);
    const Vector theta2 = testsupport::random_vector(rng, 2, 2.0);

    // shape invariance under a common translation
    const double base = w2(mu, nu);
    const double shifted = w2(pushforward(mu, AffineMap::translation(theta)),
                              pushforward(nu, AffineMap::translation(theta)));
    CHECK(std::abs(base - shifted) <= 1e-9);

    // distance between translates of one measure is |theta - theta'|
    const double law = w2(pushforward(mu, AffineMap::translation(theta)),
                          pushforward(mu, AffineMap::translation(theta2)));
    CHECK(law == doctest::Approx((theta - theta2).norm()).epsilon(1e-9));
  }
}

TEST_CASE("dilation law with the measure's own marginal moments") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 8; ++trial) {
    const auto mu = testsupport::random_measure(rng, 12, 2);
    Vector t1(2), t2(2);
    std::uniform_real_distribution<double> pos(0.4, 2.5);
    t1 << pos(rng), pos(rng);
    t2 << pos(rng), pos(rng);
    const auto a = pushforward(mu, AffineMap::scaling(t1));
    const auto b = pushforward(mu, AffineMap::scaling(t2));
    double expected = 0.0;
    for (int axis = 0; axis < 2; ++axis)
      expected += (t1(axis) - t2(axis)) * (t1(axis) - t2(axis)) *
                  marginal_second_moment(mu, axis);
    CHECK(solve_w2(a, b).cost == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("rectangle dilates reproduce the 7/3 constant") {
  const auto base = rectangle_raster(48);
  Vector one(2), two(2);
  one << 1, 1;
  two << 2, 2;
  const auto a = pushforward(base, AffineMap::scaling(one));
  const auto b = pushforward(base, AffineMap::scaling(two));
  const double cost = solve_w2(a, b).cost;
  const double moments =
      marginal_second_moment(base, 0) + marginal_second_moment(base, 1);
  CHECK(cost == doctest::Approx(moments).epsilon(1e-9));   // exact discrete law
  CHECK(cost == doctest::Approx(14.0 / 3.0).epsilon(1e-2));  // continuum constant
}

TEST_CASE("rotation upper bound") {
  std::mt19937 rng(43);
  const auto mu = testsupport::random_measure(rng, 15, 2);
  for (const double angle : {0.3, 1.2, 2.7}) {
    const auto rot = pushforward(mu, AffineMap::rotation(angle));
    double direct = 0.0;
    for (int i = 0; i < mu.size(); ++i)
      direct +=
          mu.weight(i) * (rot.locations().row(i) - mu.locations().row(i)).squaredNorm();
    CHECK(solve_w2(mu, rot).cost <= direct + 1e-10);
  }
}

TEST_CASE("pairwise distance matrix") {
  std::mt19937 rng(47);

  SUBCASE("identical measures give the zero matrix") {
    const auto mu = testsupport::random_measure(rng, 6, 2);
    const std::vector<DiscreteMeasure> measures{mu, mu};
    const auto w = pairwise_w2_squared(measures);
    CHECK(w.entries.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("matches independent solves") {
    std::vector<DiscreteMeasure> measures;
    for (int k = 0; k < 3; ++k) measures.push_back(testsupport::random_measure(rng, 6, 2));
    const auto w = pairwise_w2_squared(measures);
    w.validate(true);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        CHECK(w.entries(i, j) ==
              doctest::Approx(solve_w2(measures[i], measures[j]).cost).epsilon(1e-12));
  }
  SUBCASE("translation grid gives squared grid distances") {
    ShapeSpec disk;
    disk.kind = ShapeSpec::Kind::disk;
    disk.center = Vector::Zero(2);
    disk.radii = Vector::Constant(1, 1.0);
    Frame frame{Vector::Constant(2, -1.5), Vector::Constant(2, 1.5)};
    const auto base = base_measure(disk, {32, 32}, frame);
    const auto grid = parameter_grid(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0),
                                     {4, 4});
    const auto family = translation_family(base, grid);
    const auto w = pairwise_w2_squared(family, 2);
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = 0; j < grid.size(); ++j)
        CHECK(w.entries(i, j) ==
              doctest::Approx((grid[i] - grid[j]).squaredNorm()).epsilon(1e-9));
  }
  SUBCASE("thread count does not change any entry") {
    std::vector<DiscreteMeasure> measures;
    for (int k = 0; k < 6; ++k) measures.push_back(testsupport::random_measure(rng, 15, 2));
    const auto w1 = pairwise_w2_squared(measures, 1);
    const auto w2m = pairwise_w2_squared(measures, 2);
    CHECK((w1.entries - w2m.entries).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("sinkhorn approximation") {
  std::mt19937 rng(53);

  SUBCASE("deltas") {
    const auto r = sinkhorn_w2(delta_at(0, 0), delta_at(3, 4), 0.01, 1e-9, 5000);
    CHECK(r.value == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(r.iterations >= 1);
  }
  SUBCASE("identical measures stay near zero") {
    const auto mu = testsupport::random_measure(rng, 6, 2);
    const auto r = sinkhorn_w2(mu, mu, 0.1, 1e-7, 200000);
    CHECK(r.value * r.value <= 0.5);  // regularization floor, far below typical costs
  }
  SUBCASE("approaches the exact value from above as regularization shrinks") {
    const auto mu = testsupport::random_measure(rng, 7, 2);
    const auto nu = testsupport::random_measure(rng, 9, 2);
    const double exact = w2(mu, nu);
    double previous = std::numeric_limits<double>::infinity();
    for (const double reg : {0.8, 0.3, 0.1}) {
      const auto r = sinkhorn_w2(mu, nu, reg, 1e-7, 200000);
      CHECK(r.value >= exact - 1e-3);  // biased upward
      CHECK(r.value <= previous + 1e-9);
      previous = r.value;
    }
  }
  SUBCASE("iteration cap raises") {
    const auto mu = testsupport::random_measure(rng, 8, 2);
    const auto nu = testsupport::random_measure(rng, 8, 2);
    CHECK_THROWS_AS(sinkhorn_w2(mu, nu, 0.001, 1e-12, 2), MaxIterExceeded);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  std::mt19937 rng(59);
  const auto mu = testsupport::random_measure(rng, 4, 2);
  const auto nu = testsupport::random_measure(rng, 4, 3);
  CHECK_THROWS_AS(solve_w2(mu, nu), DimensionMismatch);
  CHECK_THROWS_AS(sinkhorn_w2(mu, nu, 0.1), DimensionMismatch);
}

TEST_CASE("distance matrix validation catches bad inputs") {
  SquaredDistanceMatrix w;
  w.entries = Matrix::Zero(3, 3);
  w.validate(true);
  w.entries(0, 1) = 1.0;  // asymmetric
  CHECK_THROWS(w.validate());
  w.entries(1, 0) = 1.0;
  w.validate();
  w.entries(2, 2) = 0.5;  // nonzero diagonal
  CHECK_THROWS(w.validate());
}
