#include "support/generators.hpp"
#include "support/oracles.hpp"

#include "sigcon/core/errors.hpp"
#include "sigcon/core/log.hpp"
#include "sigcon/core/problem.hpp"
#include "sigcon/core/random.hpp"
#include "sigcon/fne/catalog.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

using namespace sigcon;
using sigcon::testing::Gen;

namespace {

const Shape scalar = Shape::vector(1);

SpacePoint s(double v) { return SpacePoint::vector({v}); }

Prescription identity_arm(double target, double weight) {
  return make_prescription(identity_operator(scalar),
                           FneOperator("identity", scalar,
                                       [](std::span<const double> in, std::span<double> out) {
                                         out[0] = in[0];
                                       }),
                           s(target), weight);
}

ConstraintSet unit_interval() {
  return ConstraintSet::from_projector(box_projector(scalar, 0.0, 1.0), true, "[0, 1]");
}

struct WarningCapture {
  std::vector<std::string> messages;
  WarningHandler previous;
  WarningCapture() {
    previous = set_warning_handler([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~WarningCapture() { set_warning_handler(previous); }
};

/// Feasibility arms (Id - proj_{b_i}) o <a_i, .> over the rows of A.
Problem legendre_problem(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  std::vector<Prescription> arms;
  const double w = 1.0 / static_cast<double>(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    auto row = dictionary_rows(Eigen::MatrixXd(a.row(i)));
    auto f = residual_of(singleton_projector(s(b(i))));
    arms.push_back(make_prescription(row, f, s(0.0), w));
  }
  return assemble_problem(ConstraintSet::whole_space(Shape::vector(a.cols())), std::move(arms));
}

} // namespace

TEST_SUITE("space") {
  TEST_CASE("product shapes concatenate blocks with offsets") {
    auto sh = Shape::product({Shape::vector(3), Shape::grid(2, 4)});
    CHECK(sh.block_count() == 2);
    CHECK(sh.size() == 11);
    CHECK(sh.block_offset(1) == 3);
    CHECK(sh.block(1).grid);
    CHECK_FALSE(sh.is_single_grid());
    CHECK(Shape::grid(2, 2).is_single_grid());
  }

  TEST_CASE("points reject non-finite data and size mismatches") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(SpacePoint::vector({1.0, nan}), InvalidParameter);
    CHECK_THROWS_AS(SpacePoint::vector({std::numeric_limits<double>::infinity()}), InvalidParameter);
    CHECK_THROWS_AS(SpacePoint(Shape::vector(3), {1.0, 2.0}), ShapeMismatch);
    CHECK_THROWS_AS(SpacePoint::vector({1.0}) + SpacePoint::vector({1.0, 2.0}), ShapeMismatch);
    CHECK_THROWS_AS(Shape::vector(0), InvalidParameter);
  }

  TEST_CASE("arithmetic and block views") {
    auto sh = Shape::product({Shape::vector(2), Shape::vector(1)});
    SpacePoint a(sh, {1.0, 2.0, 3.0});
    SpacePoint b(sh, {0.5, -1.0, 4.0});
    CHECK(dot(a, b) == doctest::Approx(10.5));
    CHECK((a - b).to_vector() == std::vector<double>{0.5, 3.0, -1.0});
    CHECK(axpy(2.0, a, b).to_vector() == std::vector<double>{2.5, 3.0, 10.0});
    CHECK(a.block(1).size() == 1);
    CHECK(a.block(1)[0] == 3.0);
    CHECK(distance(a, a) == 0.0);
    CHECK(a.norm() == doctest::Approx(std::sqrt(14.0)));
  }
}

TEST_SUITE("random") {
  TEST_CASE("draws are a pure function of seed, stream and counter") {
    CounterRng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    for (int k = 0; k < 100; ++k) {
      const auto x = a.next_u64();
      CHECK(x == b.next_u64());
      CHECK(x != c.next_u64());
      CHECK(x != d.next_u64());
    }
    CHECK(a.counter() == 100);
  }

  TEST_CASE("uniform draws stay strictly inside (0, 1) and normals have unit moments") {
    CounterRng r(1, 1);
    double mean = 0.0, sq = 0.0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
      const double u = r.uniform();
      REQUIRE(u > 0.0);
      REQUIRE(u < 1.0);
      const double g = r.normal();
      mean += g;
      sq += g * g;
    }
    mean /= n;
    sq /= n;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(sq - 1.0) < 0.02);
  }

  TEST_CASE("below covers its range without bias at small n") {
    CounterRng r(5, 9);
    std::vector<int> hits(5, 0);
    for (int k = 0; k < 50000; ++k) ++hits[r.below(5)];
    for (int h : hits) CHECK(std::abs(h - 10000) < 400);
  }
}

TEST_SUITE("problem") {
  TEST_CASE("single arm with unit weight is valid") {
    auto p = assemble_problem(ConstraintSet::whole_space(scalar), {identity_arm(5.0, 1.0)});
    CHECK(p.size() == 1);
    CHECK(p.arm(0).norm_sq_bound == 1.0);
  }

  TEST_CASE("uniform weights are valid") {
    auto p = assemble_problem(ConstraintSet::whole_space(scalar),
                              {identity_arm(1.0, 0.5), identity_arm(2.0, 0.5)});
    CHECK(p.size() == 2);
  }

  TEST_CASE("weights off by more than the tolerance are rejected") {
    CHECK_THROWS_AS(assemble_problem(ConstraintSet::whole_space(scalar),
                                     {identity_arm(1.0, 0.5), identity_arm(2.0, 0.6)}),
                    WeightSumError);
  }

  TEST_CASE("tiny weight drift is renormalized") {
    auto p = assemble_problem(ConstraintSet::whole_space(scalar),
                              {identity_arm(1.0, 0.5 + 4e-10), identity_arm(2.0, 0.5)});
    CHECK(p.arm(0).weight + p.arm(1).weight == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("invalid weights, shapes and empty problems") {
    CHECK_THROWS_AS(assemble_problem(ConstraintSet::whole_space(scalar), {}), InvalidParameter);
    CHECK_THROWS_AS(assemble_problem(ConstraintSet::whole_space(scalar),
                                     {identity_arm(1.0, 0.0), identity_arm(1.0, 1.0)}),
                    InvalidParameter);
    CHECK_THROWS_AS(assemble_problem(ConstraintSet::whole_space(Shape::vector(2)),
                                     {identity_arm(1.0, 1.0)}),
                    ShapeMismatch);
    CHECK_THROWS_AS(ConstraintSet::from_projector(soft_thresholder(scalar, 1.0), false),
                    InvalidParameter);
  }
}

TEST_SUITE("vi_residual") {
  TEST_CASE("exact root on the whole space") {
    auto p = assemble_problem(ConstraintSet::whole_space(scalar), {identity_arm(5.0, 1.0)});
    CHECK(vi_residual(p, s(5.0)) == 0.0);
  }

  TEST_CASE("boundary solution of a box-constrained problem") {
    auto p = assemble_problem(unit_interval(), {identity_arm(5.0, 1.0)});
    CHECK(vi_residual(p, s(1.0)) == 0.0);
    CHECK(vi_residual(p, s(0.5)) > 0.0);
    CHECK(vi_residual(p, s(0.0)) > 0.0);
  }

  TEST_CASE("property: zero at the solution for every theta, positive elsewhere") {
    Gen g(11);
    for (int trial = 0; trial < 200; ++trial) {
      const double lo = g.uniform(-3.0, 0.0), hi = lo + g.uniform(0.1, 3.0);
      const std::size_t k = 1 + g.index(4);
      std::vector<double> w(k);
      double total = 0.0;
      for (auto& v : w) total += (v = g.uniform(0.1, 1.0));
      std::vector<Prescription> arms;
      double mean = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double t = g.uniform(-5.0, 5.0);
        mean += w[i] / total * t;
        arms.push_back(identity_arm(t, w[i] / total));
      }
      auto p = assemble_problem(
          ConstraintSet::from_projector(box_projector(scalar, lo, hi), true), std::move(arms));
      // Solution of the scalar inequality: the clamped weighted mean.
      const double xbar = std::clamp(mean, lo, hi);
      for (double theta : {0.01, 0.5, 1.0, 7.0})
        CHECK(vi_residual(p, s(xbar), theta) <= 1e-14);
      const double off = std::clamp(xbar + g.uniform(0.05, 1.0) * (g.coin() ? 1 : -1), lo, hi);
      if (std::abs(off - xbar) > 1e-3) CHECK(vi_residual(p, s(off)) > 0.0);
    }
  }

  TEST_CASE("weighted field matches a direct sum") {
    Gen g(12);
    auto a = g.matrix(5, 3);
    Eigen::VectorXd b(5);
    for (int i = 0; i < 5; ++i) b(i) = g.normal();
    auto p = legendre_problem(a, b);
    for (int trial = 0; trial < 20; ++trial) {
      auto x = g.point(Shape::vector(3));
      Eigen::VectorXd expect = a.transpose() * (a * testing::to_eigen(x) - b) / 5.0;
      auto got = weighted_field(p, x);
      for (int j = 0; j < 3; ++j) CHECK(got[j] == doctest::Approx(expect(j)).epsilon(1e-12));
    }
  }

  TEST_CASE("non-positive theta is rejected") {
    auto p = assemble_problem(ConstraintSet::whole_space(scalar), {identity_arm(5.0, 1.0)});
    CHECK_THROWS_AS(vi_residual(p, s(1.0), 0.0), InvalidParameter);
  }
}

TEST_SUITE("inconsistency") {
  TEST_CASE("consistent problem at its solution has zero bound") {
    auto p = assemble_problem(ConstraintSet::whole_space(scalar),
                              {identity_arm(2.0, 0.5), identity_arm(2.0, 0.5)});
    CHECK(inconsistency_bound(p, s(2.0)) <= 1e-8);
  }

  TEST_CASE("distance from a box to a disjoint interval") {
    auto f = residual_of(box_projector(scalar, 2.0, 3.0));
    auto p = assemble_problem(unit_interval(),
                              {make_prescription(identity_operator(scalar), f, s(0.0), 1.0)});
    REQUIRE(vi_residual(p, s(1.0)) == 0.0);
    CHECK(inconsistency_bound(p, s(1.0)) == doctest::Approx(1.0));
  }

  TEST_CASE("shifted targets on the whole space stay consistent") {
    auto p = assemble_problem(ConstraintSet::whole_space(scalar), {identity_arm(2.0 + 0.7, 1.0)});
    CHECK(inconsistency_bound(p, s(2.7)) == 0.0);
  }

  TEST_CASE("warns when evaluated away from a solution") {
    WarningCapture cap;
    auto p = assemble_problem(ConstraintSet::whole_space(scalar), {identity_arm(5.0, 1.0)});
    const double bound = inconsistency_bound(p, s(0.0));
    CHECK(bound == doctest::Approx(5.0));
    REQUIRE(cap.messages.size() == 1);
    CHECK(cap.messages[0].find("vi_residual") != std::string::npos);
  }
}

TEST_SUITE("least_squares") {
  TEST_CASE("feasible point has zero objective") {
    auto f = residual_of(box_projector(scalar, 2.0, 3.0));
    auto p = assemble_problem(ConstraintSet::whole_space(scalar),
                              {make_prescription(identity_operator(scalar), f, s(0.0), 1.0)});
    CHECK(least_squares_objective(p, s(2.5)) == 0.0);
    CHECK(least_squares_objective(p, s(0.0)) == doctest::Approx(2.0));
  }

  TEST_CASE("feasibility arms over matrix rows give the scaled residual norm") {
    Gen g(21);
    auto a = g.matrix(12, 8);
    Eigen::VectorXd b(12);
    for (int i = 0; i < 12; ++i) b(i) = g.normal();
    auto p = legendre_problem(a, b);
    for (int trial = 0; trial < 50; ++trial) {
      auto x = g.point(Shape::vector(8));
      const double expect = (a * testing::to_eigen(x) - b).squaredNorm() / (2.0 * 12.0);
      CHECK(least_squares_objective(p, x) == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  TEST_CASE("arms that are not distance residuals are unsupported") {
    auto p = assemble_problem(ConstraintSet::whole_space(scalar), {identity_arm(0.0, 1.0)});
    CHECK_THROWS_AS(least_squares_objective(p, s(1.0)), UnsupportedObjective);
    auto f = residual_of(box_projector(scalar, 2.0, 3.0));
    auto q = assemble_problem(ConstraintSet::whole_space(scalar),
                              {make_prescription(identity_operator(scalar), f, s(1.0), 1.0)});
    CHECK_THROWS_AS(least_squares_objective(q, s(1.0)), UnsupportedObjective);
  }
}
