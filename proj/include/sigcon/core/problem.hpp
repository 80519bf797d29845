#pragma once

#include "sigcon/core/space_point.hpp"
#include "sigcon/fne/fne_operator.hpp"
#include "sigcon/linops/linear_operator.hpp"

#include <string>
#include <vector>

namespace sigcon {

/// Closed convex subset C of the solution space, given by its projector.
struct ConstraintSet {
  Shape shape;
  VectorMap projector;
  bool bounded = false;
  std::string description;

  SpacePoint project(const SpacePoint& x) const;

  static ConstraintSet whole_space(const Shape& shape);
  /// Wraps a projector from the operator catalog.
  static ConstraintSet from_projector(const FneOperator& projector, bool bounded,
                                      std::string description = {});
};

/// One arm F_i(L_i x) = p_i of the model, with weight w_i.
struct Prescription {
  LinearOperator linop;
  FneOperator fne;
  SpacePoint target;
  double weight = 1.0;
  /// Upper bound on ||L_i||^2; step sizes are gamma / norm_sq_bound.
  double norm_sq_bound = 1.0;
};

/// Prescription with norm_sq_bound taken from the operator's certified bound.
Prescription make_prescription(LinearOperator linop, FneOperator fne, SpacePoint target,
                               double weight);

/// A validated instance: constraint set plus weighted prescriptions with
/// weights summing to one.
class Problem {
public:
  const ConstraintSet& constraint() const { return constraint_; }
  const std::vector<Prescription>& prescriptions() const { return arms_; }
  const Prescription& arm(std::size_t i) const { return arms_.at(i); }
  std::size_t size() const { return arms_.size(); }
  const Shape& shape() const { return constraint_.shape; }

private:
  Problem(ConstraintSet c, std::vector<Prescription> arms)
      : constraint_(std::move(c)), arms_(std::move(arms)) {}
  friend Problem assemble_problem(ConstraintSet, std::vector<Prescription>);

  ConstraintSet constraint_;
  std::vector<Prescription> arms_;
};

/// Validates shapes, weights and norm bounds. Weights off from 1 by at most
/// 1e-9 are renormalized; larger deviations throw WeightSumError.
Problem assemble_problem(ConstraintSet constraint, std::vector<Prescription> prescriptions);

/// F_i(L_i x).
SpacePoint prescription_image(const Prescription& arm, const SpacePoint& x);
/// F_i(L_i x) - p_i.
SpacePoint prescription_residual(const Prescription& arm, const SpacePoint& x);
/// sum_i w_i L_i^*(F_i(L_i x) - p_i), accumulated in index order.
SpacePoint weighted_field(const Problem& problem, const SpacePoint& x);

/// ||x - proj_C(x - theta * weighted_field(x))|| / (1 + ||x||). Zero exactly
/// at solutions, for every theta > 0.
double vi_residual(const Problem& problem, const SpacePoint& x, double theta = 1.0);

/// sqrt(sum_i ||p_i - F_i(L_i x)||^2), an upper bound on the distance from
/// the targets to the realizable set when x solves the problem. Warns when
/// vi_residual(x) exceeds `tol`.
double inconsistency_bound(const Problem& problem, const SpacePoint& solution,
                           double tol = 1e-6, double theta = 1.0);

/// 1/2 sum_i w_i d_{D_i}(L_i x)^2. Needs every arm to be Id - proj_{D_i} with
/// a zero target (UnsupportedObjective otherwise).
double least_squares_objective(const Problem& problem, const SpacePoint& x);

} // namespace sigcon
