#include "support/generators.hpp"
#include "support/equivalence.hpp"
#include "support/oracles.hpp"

#include "sigcon/core/errors.hpp"
#include "sigcon/fne/proxification.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace sigcon;
using namespace sigcon::testing;

namespace {

void check_equivalence(const Tally& t) {
  CHECK(t.disagreements == 0);
  CHECK(t.solutions > 0);
  CHECK(t.non_solutions > 0);
}

void check_fne(const FneOperator& f, Gen& g, double scale) {
  for (int trial = 0; trial < 1000; ++trial) {
    auto x = g.point(f.domain(), scale);
    auto y = trial % 2 ? g.point(f.domain(), scale) : g.nearby(x, 0.1 * scale);
    CHECK(testing::fne_excess(f, x, y) <= 1e-10 * (1.0 + distance(x, y) * distance(x, y)));
  }
}

SpacePoint diag(std::initializer_list<double> d) {
  const std::size_t n = d.size();
  std::vector<double> v(n * n, 0.0);
  std::size_t k = 0;
  for (double x : d) {
    v[k * n + k] = x;
    ++k;
  }
  return SpacePoint::grid(n, n, v);
}

} // namespace

TEST_SUITE("hard threshold") {
  TEST_CASE("hand-evaluated pair") {
    auto px = proxify_hard_threshold(1.0, SpacePoint::vector({2.0, 0.0}));
    CHECK(px.target.to_vector() == std::vector<double>{1.0, 0.0});
    auto y = SpacePoint::vector({2.0, 0.5});
    CHECK(hard_threshold_map(y, 1.0).to_vector() == std::vector<double>{2.0, 0.0});
    CHECK(px.fne.apply(y).to_vector() == std::vector<double>{1.0, 0.0});
  }

  TEST_CASE("observations strictly inside the dead zone are not in the range") {
    CHECK_THROWS_AS(proxify_hard_threshold(1.0, SpacePoint::vector({0.5})), NotInRange);
    CHECK_THROWS_AS(proxify_hard_threshold(1.0, SpacePoint::vector({-1.0})), NotInRange);
  }

  TEST_CASE("sampled set equivalence on 500 points") {
    Gen g(31);
    auto [t, px, scale] = hard_threshold_scenario(g, 500);
    check_equivalence(t);
    check_fne(px.fne, g, scale);
  }
}

TEST_SUITE("block threshold") {
  TEST_CASE("singleton sets on scalar blocks reduce to the hard threshold") {
    Gen g(32);
    const double gamma = 0.6;
    const std::size_t n = 6;
    std::vector<Shape> parts(n, Shape::vector(1));
    const auto shape = Shape::product(parts);
    std::vector<FneOperator> sets(n, singleton_projector(SpacePoint::vector({0.0})));
    auto q = hard_threshold_map(g.point(shape), gamma);
    auto bt = proxify_block_threshold(sets, std::vector<double>(n, gamma), q);
    auto ht = proxify_hard_threshold(gamma, SpacePoint::vector(q.to_vector()));
    CHECK(bt.target.to_vector() == ht.target.to_vector());
    for (int trial = 0; trial < 200; ++trial) {
      auto y = g.point(shape);
      auto a = bt.fne.apply(y).to_vector();
      auto b = ht.fne.apply(SpacePoint::vector(y.to_vector())).to_vector();
      for (std::size_t k = 0; k < n; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-14));
      CHECK(block_threshold_map(y, partition_of(shape), sets, std::vector<double>(n, gamma)).to_vector() ==
            hard_threshold_map(SpacePoint::vector(y.to_vector()), gamma).to_vector());
    }
  }

  TEST_CASE("targets inside the set are kept and the interval example shrinks by half") {
    const auto b1 = Shape::vector(1);
    auto unit = box_projector(b1, 0.0, 1.0);
    auto inside = proxify_block_threshold({unit}, {1.0}, SpacePoint::vector({0.4}));
    CHECK(inside.target[0] == 0.4);
    auto far = proxify_block_threshold({unit}, {1.0}, SpacePoint::vector({3.0}));
    CHECK(far.target[0] == doctest::Approx(2.0));
    CHECK_THROWS_AS(proxify_block_threshold({unit}, {1.0}, SpacePoint::vector({1.5})), NotInRange);
  }

  TEST_CASE("sampled set equivalence on 500 points") {
    Gen g(33);
    auto [t, px, scale] = block_threshold_scenario(g, 500);
    check_equivalence(t);
    check_fne(px.fne, g, scale);
  }
}

TEST_SUITE("svd") {
  TEST_CASE("diagonal examples") {
    auto px = proxify_svd(2.0, diag({3.0, 0.0}));
    CHECK(same(px.target, diag({1.0, 0.0}), 1e-14));
    auto y = diag({3.0, 1.0});
    CHECK(same(svd_hard_threshold_map(y, 2.0), diag({3.0, 0.0}), 1e-14));
    CHECK(same(px.fne.apply(y), diag({1.0, 0.0}), 1e-14));
    CHECK_THROWS_AS(proxify_svd(2.0, diag({3.0, 1.5})), NotInRange);
  }

  TEST_CASE("shrinkage never increases the rank") {
    Gen g(34);
    for (int trial = 0; trial < 100; ++trial) {
      const auto r = 1 + g.index(3);
      std::vector<double> sv;
      for (std::size_t k = 0; k < r; ++k) sv.push_back(g.uniform(0.2, 4.0));
      auto y = testing::from_matrix(g.matrix_with_singular_values(5, 6, sv));
      auto f = svd_soft_threshold(5, 6, g.uniform(0.1, 2.0)).apply(y);
      auto s = singular_values(f);
      std::size_t rank = 0;
      for (double v : s) rank += v > 1e-9 * (1.0 + s[0]);
      CHECK(rank <= r);
    }
  }

  TEST_CASE("singular values agree with an eigen-decomposition oracle") {
    Gen g(35);
    auto m = g.matrix(4, 7);
    auto s = singular_values(testing::from_matrix(m));
    Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m * m.transpose()).eigenvalues();
    REQUIRE(s.size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(s[k] == doctest::Approx(std::sqrt(ev(3 - k))).epsilon(1e-10));
  }

  TEST_CASE("rank to threshold") {
    CHECK(rank_to_threshold(diag({10.0, 5.0, 0.0}), 2) == doctest::Approx(4.95));
    CHECK_THROWS_AS(rank_to_threshold(SpacePoint::zeros(Shape::grid(3, 3)), 1), RankDeficient);
    CHECK(rank_to_threshold(diag({4000.0, 1500.0 / 0.99, 0.0}), 2) == doctest::Approx(1500.0));
  }

  TEST_CASE("sampled set equivalence on 500 points") {
    Gen g(36);
    auto [t, px, scale] = svd_scenario(g, 500);
    check_equivalence(t);
    check_fne(px.fne, g, scale);
  }
}

TEST_SUITE("root") {
  TEST_CASE("hand-evaluated anchors at rho 0.05") {
    CHECK(root_observation(0.13, 0.05) == doctest::Approx(0.12).epsilon(1e-14));
    CHECK(root_shrink(0.12, 0.05) == doctest::Approx(0.08).epsilon(1e-14));
    CHECK(root_shrink(root_observation(0.13, 0.05), 0.05) ==
          doctest::Approx(soft_threshold(0.13, 0.05)).epsilon(1e-14));
  }

  TEST_CASE("zero observation and the dead zone") {
    auto px = proxify_root(0.05, 0.0);
    CHECK(px.target[0] == 0.0);
    Gen g(37);
    for (int trial = 0; trial < 100; ++trial) {
      const double y = g.uniform(-0.05, 0.05);
      CHECK(root_observation(y, 0.05) == 0.0);
      CHECK(px.fne.apply(SpacePoint::vector({y}))[0] == 0.0);
    }
  }

  TEST_CASE("the shrink inverts the observation outside the dead zone") {
    Gen g(38);
    for (int trial = 0; trial < 500; ++trial) {
      const double rho = g.uniform(0.01, 2.0), eta = g.uniform(-10.0, 10.0);
      CHECK(root_shrink(root_observation(eta, rho), rho) ==
            doctest::Approx(soft_threshold(eta, rho)).epsilon(1e-12));
    }
  }

  TEST_CASE("misspecified data model has the same dead zone") {
    CHECK(quartic_root_threshold(0.04, 0.05) == 0.0);
    CHECK(quartic_root_threshold(-0.2, 0.05) == doctest::Approx(-std::pow(0.2 * 0.2 * 0.2 * 0.2 - std::pow(0.05, 4), 0.25)));
  }

  TEST_CASE("sampled set equivalence on 500 points") {
    Gen g(39);
    auto [t, px, scale] = root_scenario(g, 500);
    check_equivalence(t);
    check_fne(px.fne, g, scale);
  }
}
