#include "support/generators.hpp"
#include "support/oracles.hpp"

#include "sigcon/core/errors.hpp"
#include "sigcon/fne/catalog.hpp"
#include "sigcon/fne/proxification.hpp"
#include "sigcon/solver/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace sigcon;
using sigcon::testing::Gen;

namespace {

const Shape scalar = Shape::vector(1);

SpacePoint s(double v) { return SpacePoint::vector({v}); }

FneOperator identity_fne(const Shape& sh) {
  return FneOperator("identity", sh, [](std::span<const double> in, std::span<double> out) {
    std::copy(in.begin(), in.end(), out.begin());
  });
}

Prescription scaled_identity_arm(double scale, double target, double weight) {
  Eigen::MatrixXd m(1, 1);
  m(0, 0) = scale;
  return make_prescription(dense_matrix_operator(m), identity_fne(scalar), s(target), weight);
}

Problem legendre_problem(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  std::vector<Prescription> arms;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    arms.push_back(make_prescription(dictionary_rows(Eigen::MatrixXd(a.row(i))),
                                     residual_of(singleton_projector(s(b(i)))), s(0.0),
                                     1.0 / static_cast<double>(a.rows())));
  return assemble_problem(ConstraintSet::whole_space(Shape::vector(a.cols())), std::move(arms));
}

/// Random consistent problem: targets are the images of a hidden point.
Problem consistent_problem(Gen& g, SpacePoint& hidden) {
  const std::size_t n = 6;
  const auto sh = Shape::vector(n);
  hidden = g.point(sh, 1.0);
  std::vector<Prescription> arms;
  auto add = [&](LinearOperator l, FneOperator f) {
    auto target = f.apply(l.apply(hidden));
    arms.push_back(make_prescription(std::move(l), std::move(f), target, 0.25));
  };
  add(identity_operator(sh), box_projector(sh, -0.5, 0.5));
  add(dense_matrix_operator(g.matrix(4, n)), soft_thresholder(Shape::vector(4), 0.3));
  add(finite_difference_1d(n), group_shrinkage(Shape::vector(n - 1), {2, 3}, {0.2, 0.4}));
  add(dense_matrix_operator(g.matrix(n, n)), soft_clipper(sh, SoftClipVariant::arctan));
  return assemble_problem(ConstraintSet::whole_space(sh), std::move(arms));
}

SolverConfig config(double gamma, std::size_t iters, double tol) {
  SolverConfig c;
  c.gamma = gamma;
  c.max_iters = iters;
  c.tol = tol;
  return c;
}

} // namespace

TEST_SUITE("convergence") {
  TEST_CASE("single identity arm converges to its target") {
    auto p = assemble_problem(ConstraintSet::whole_space(scalar), {scaled_identity_arm(1.0, 5.0, 1.0)});
    auto r = solve(p, full_schedule(1), config(1.0, 200, 1e-10));
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.iterations <= 200);
    CHECK(r.solution[0] == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(vi_residual(p, r.solution) <= 1e-10);
  }

  TEST_CASE("box constraint stops the iterate at the boundary") {
    auto p = assemble_problem(
        ConstraintSet::from_projector(box_projector(scalar, 0.0, 1.0), true),
        {scaled_identity_arm(1.0, 5.0, 1.0)});
    auto r = solve(p, full_schedule(1), config(1.5, 200, 1e-12));
    CHECK(r.solution[0] == 1.0);
  }

  TEST_CASE("feasibility arms over matrix rows recover the least-squares solution") {
    Gen g(51);
    for (int trial = 0; trial < 3; ++trial) {
      auto a = g.matrix(12, 8);
      for (Eigen::Index i = 0; i < 12; ++i) a.row(i) *= std::pow(3.0, g.uniform(-1.0, 1.0));
      Eigen::VectorXd b(12);
      for (int i = 0; i < 12; ++i) b(i) = 2.0 * g.normal();
      const Eigen::VectorXd oracle = testing::normal_equations(a, b);
      REQUIRE((a * oracle - b).norm() > 0.1);
      auto p = legendre_problem(a, b);
      auto r = solve(p, full_schedule(12), config(1.9, 500000, 1e-13));
      CHECK(r.status == SolveStatus::converged);
      const double rel = (testing::to_eigen(r.solution) - oracle).norm() / oracle.norm();
      CHECK(rel <= 1e-6);
    }
  }

  TEST_CASE("consistent problems are solved exactly") {
    Gen g(52);
    for (int trial = 0; trial < 5; ++trial) {
      SpacePoint hidden = SpacePoint::zeros(scalar);
      auto p = consistent_problem(g, hidden);
      auto r = solve(p, full_schedule(p.size()), config(1.9, 400000, 1e-10));
      CHECK(r.status == SolveStatus::converged);
      double worst = 0.0;
      for (const auto& arm : p.prescriptions())
        worst = std::max(worst, prescription_residual(arm, r.solution).norm());
      CHECK(worst <= 1e-6);
    }
  }

  TEST_CASE("schedules agree on the prescription images of an inconsistent problem") {
    Gen g(53);
    auto a = g.matrix(6, 4);
    Eigen::VectorXd b(6);
    for (int i = 0; i < 6; ++i) b(i) = g.normal();
    auto p = legendre_problem(a, b);
    auto cfg = config(1.5, 1000000, 1e-12);
    auto full = solve(p, full_schedule(6), cfg);
    auto cyc = solve(p, cyclic_partition_schedule(6, {{0, 1}, {2, 3}, {4, 5}}), cfg);
    auto skip = solve(p, mod_skip_schedule(6, {0, 3}, 5), cfg);
    for (const auto* r : {&cyc, &skip}) {
      CHECK(r->status == SolveStatus::converged);
      for (const auto& arm : p.prescriptions())
        CHECK(distance(prescription_image(arm, r->solution), prescription_image(arm, full.solution)) <= 1e-8);
    }
  }
}

TEST_SUITE("averaging") {
  TEST_CASE("balanced weights are proportional to weight times norm bound") {
    auto p = assemble_problem(ConstraintSet::whole_space(scalar),
                              {scaled_identity_arm(1.0, 0.0, 0.5), scaled_identity_arm(2.0, 1.0, 0.5)});
    auto a = averaging_weights(p, Averaging::balanced);
    const double b0 = p.arm(0).norm_sq_bound, b1 = p.arm(1).norm_sq_bound;
    CHECK(a[0] == doctest::Approx(b0 / (b0 + b1)));
    CHECK(a[1] == doctest::Approx(b1 / (b0 + b1)));
    auto l = averaging_weights(p, Averaging::literal);
    CHECK(l[0] == 0.5);
    CHECK(l[1] == 0.5);
  }

  TEST_CASE("literal averaging solves the reweighted inequality, balanced the stated one") {
    auto arm2 = scaled_identity_arm(2.0, 1.0, 0.5);
    arm2.norm_sq_bound = 4.0;
    auto arm1 = scaled_identity_arm(1.0, 0.0, 0.5);
    arm1.norm_sq_bound = 1.0;
    auto p = assemble_problem(ConstraintSet::whole_space(scalar), {arm1, arm2});
    // 1/2 x + 1/2 * 2 (2x - 1) = 0.
    auto balanced = solve(p, full_schedule(2), config(1.0, 10000, 1e-14));
    CHECK(balanced.solution[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(vi_residual(p, balanced.solution) <= 1e-14);
    // 1/2 x + 1/8 * 2 (2x - 1) = 0.
    auto lit_cfg = config(1.0, 10000, 0.0);
    lit_cfg.averaging = Averaging::literal;
    lit_cfg.max_iters = 2000;
    auto literal = solve(p, full_schedule(2), lit_cfg);
    CHECK(literal.solution[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(vi_residual(p, literal.solution) > 0.05);
  }

  TEST_CASE("equal norm bounds make both averagings identical") {
    Gen g(54);
    const auto sh = Shape::vector(3);
    std::vector<Prescription> arms;
    for (int i = 0; i < 3; ++i)
      arms.push_back(make_prescription(identity_operator(sh), box_projector(sh, -0.2 * i, 0.3), g.point(sh), 1.0 / 3.0));
    auto p = assemble_problem(ConstraintSet::whole_space(sh), std::move(arms));
    auto c1 = config(1.3, 50, 0.0);
    auto c2 = c1;
    c2.averaging = Averaging::literal;
    auto r1 = solve(p, full_schedule(3), c1), r2 = solve(p, full_schedule(3), c2);
    CHECK(r1.solution.to_vector() == r2.solution.to_vector());
  }
}

TEST_SUITE("step") {
  TEST_CASE("arms already at their targets leave only the projection") {
    Gen g(55);
    const auto sh = Shape::vector(4);
    auto x = g.point(sh, 3.0);
    std::vector<Prescription> arms;
    for (int i = 0; i < 2; ++i) arms.push_back(make_prescription(identity_operator(sh), identity_fne(sh), x, 0.5));
    auto p = assemble_problem(ConstraintSet::from_projector(box_projector(sh, -1.0, 1.0), true), std::move(arms));
    auto cfg = config(1.0, 1, 0.0);
    cfg.x0 = x;
    auto next = step(initial_state(p, cfg), p, {0, 1}, cfg);
    auto expect = box_projector(sh, -1.0, 1.0).apply(x);
    for (std::size_t k = 0; k < 4; ++k) CHECK(next.x[k] == doctest::Approx(expect[k]).epsilon(1e-15));
  }

  TEST_CASE("inactive block terms are carried over bit for bit") {
    Gen g(56);
    auto a = g.matrix(5, 3);
    Eigen::VectorXd b(5);
    for (int i = 0; i < 5; ++i) b(i) = g.normal();
    auto p = legendre_problem(a, b);
    auto cfg = config(1.2, 1, 0.0);
    cfg.x0 = g.point(Shape::vector(3));
    auto st = initial_state(p, cfg);
    for (int it = 0; it < 20; ++it) {
      IndexSet active{static_cast<std::size_t>(it % 5), static_cast<std::size_t>((it + 2) % 5)};
      auto next = step(st, p, active, cfg);
      for (std::size_t i = 0; i < 5; ++i) {
        if (std::find(active.begin(), active.end(), i) != active.end()) continue;
        CHECK(next.t[i].to_vector() == st.t[i].to_vector());
      }
      CHECK(next.n == st.n + 1);
      st = next;
    }
  }

  TEST_CASE("a full literal step is a gradient step with per-arm steps") {
    Gen g(57);
    auto a = g.matrix(6, 4);
    Eigen::VectorXd b(6);
    for (int i = 0; i < 6; ++i) b(i) = g.normal();
    auto p = legendre_problem(a, b);
    for (auto mode : {Averaging::literal, Averaging::balanced}) {
      auto cfg = config(1.7, 1, 0.0);
      cfg.averaging = mode;
      cfg.x0 = g.point(Shape::vector(4));
      auto next = step(initial_state(p, cfg), p, {0, 1, 2, 3, 4, 5}, cfg);
      // Gradient of 1/2 w_i d_{b_i}(<a_i, x>)^2 is w_i a_i (<a_i, x> - b_i).
      const Eigen::VectorXd x = testing::to_eigen(*cfg.x0);
      double denom = 0.0;
      for (std::size_t i = 0; i < 6; ++i) denom += p.arm(i).weight * p.arm(i).norm_sq_bound;
      Eigen::VectorXd expect = x;
      for (Eigen::Index i = 0; i < 6; ++i) {
        const double w = 1.0 / 6.0, bound = p.arm(i).norm_sq_bound;
        const double stepsize = mode == Averaging::literal ? 1.7 / bound : 1.7 / denom;
        expect -= stepsize * w * a.row(i).transpose() * (a.row(i).dot(x) - b(i));
      }
      for (int k = 0; k < 4; ++k) CHECK(next.x[k] == doctest::Approx(expect(k)).epsilon(1e-12));
    }
  }

  TEST_CASE("one-step initialization applies one arm update") {
    auto p = assemble_problem(ConstraintSet::whole_space(scalar), {scaled_identity_arm(1.0, 5.0, 1.0)});
    auto cfg = config(0.5, 1, 0.0);
    cfg.t_init = TInitPolicy::one_step;
    cfg.x0 = s(1.0);
    auto st = initial_state(p, cfg);
    CHECK(st.t[0][0] == doctest::Approx(1.0 - 0.5 / p.arm(0).norm_sq_bound * (1.0 - 5.0)));
    cfg.t_init = TInitPolicy::copy_x0;
    CHECK(initial_state(p, cfg).t[0][0] == 1.0);
  }
}

TEST_SUITE("configuration") {
  TEST_CASE("relaxation outside the open interval (0, 2) is rejected") {
    for (double gamma : {0.0, 2.0, 2.5, -1.0}) {
      auto c = config(gamma, 10, 1e-6);
      CHECK_THROWS_AS(validate_config(c), InvalidParameter);
    }
    CHECK_NOTHROW(validate_config(config(1.999, 10, 1e-6)));
    auto c = config(1.0, 10, 1e-6);
    c.trace_every = 0;
    CHECK_THROWS_AS(validate_config(c), InvalidParameter);
  }

  TEST_CASE("schedule and problem sizes must match") {
    auto p = assemble_problem(ConstraintSet::whole_space(scalar), {scaled_identity_arm(1.0, 5.0, 1.0)});
    CHECK_THROWS_AS(solve(p, full_schedule(2), config(1.0, 10, 1e-6)), InvalidParameter);
    auto c = config(1.0, 10, 1e-6);
    c.x0 = SpacePoint::vector({1.0, 2.0});
    CHECK_THROWS_AS(solve(p, full_schedule(1), c), ShapeMismatch);
  }
}

TEST_SUITE("trace") {
  TEST_CASE("records at start, every trace_every iterations and at the cap") {
    Gen g(58);
    auto a = g.matrix(6, 4);
    Eigen::VectorXd b(6);
    for (int i = 0; i < 6; ++i) b(i) = g.normal();
    auto p = legendre_problem(a, b);
    auto c = config(1.0, 23, 0.0);
    c.trace_every = 5;
    c.keep_snapshots = true;
    c.record_gaps = true;
    auto r = solve(p, cyclic_partition_schedule(6, {{0, 1, 2}, {3, 4, 5}}), c);
    CHECK(r.status == SolveStatus::max_iters);
    CHECK(r.iterations == 23);
    std::vector<std::size_t> ns;
    for (const auto& rec : r.trace.records) ns.push_back(rec.n);
    CHECK(ns == std::vector<std::size_t>{0, 5, 10, 15, 20, 23});
    CHECK(r.trace.records[0].step_norm == 0.0);
    CHECK(r.trace.records[1].active_set_id == 0);
    CHECK(r.trace.records[1].active == IndexSet{0, 1, 2});
    CHECK(r.trace.records[5].active_set_id == 0);
    CHECK(r.trace.snapshots.size() == ns.size());
    CHECK(r.trace.records.back().gaps.size() == 6);
    CHECK(r.trace.snapshots.back().to_vector() == r.solution.to_vector());
    CHECK(r.residual == r.trace.records.back().residual);
    CHECK(to_string(r.status) == "max_iters");
  }

  TEST_CASE("repeated solves are bitwise identical") {
    Gen g(59);
    SpacePoint hidden = SpacePoint::zeros(scalar);
    auto p = consistent_problem(g, hidden);
    auto c = config(1.9, 300, 0.0);
    auto r1 = solve(p, mod_skip_schedule(p.size(), {1}, 3), c);
    auto r2 = solve(p, mod_skip_schedule(p.size(), {1}, 3), c);
    CHECK(r1.solution.to_vector() == r2.solution.to_vector());
    REQUIRE(r1.trace.records.size() == r2.trace.records.size());
    for (std::size_t k = 0; k < r1.trace.records.size(); ++k) {
      CHECK(r1.trace.records[k].residual == r2.trace.records[k].residual);
      CHECK(r1.trace.records[k].step_norm == r2.trace.records[k].step_norm);
    }
  }

  TEST_CASE("property: step norms of a consistent full-activation run never increase") {
    Gen g(60);
    for (int trial = 0; trial < 5; ++trial) {
      SpacePoint hidden = SpacePoint::zeros(scalar);
      auto p = consistent_problem(g, hidden);
      auto r = solve(p, full_schedule(p.size()), config(1.0, 200, 0.0));
      for (std::size_t k = 2; k < r.trace.records.size(); ++k)
        CHECK(r.trace.records[k].step_norm <= r.trace.records[k - 1].step_norm * (1.0 + 1e-9) + 1e-15);
    }
  }
}
