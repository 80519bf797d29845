#include "sigcon/core/problem.hpp"

#include "sigcon/core/errors.hpp"
#include "sigcon/core/log.hpp"

#include <cmath>
#include <sstream>

namespace sigcon {

SpacePoint ConstraintSet::project(const SpacePoint& x) const {
  require_same_shape(shape, x.shape(), "constraint projection");
  std::vector<double> out(x.size());
  projector(x.values(), out);
  return SpacePoint::unchecked(shape, std::move(out));
}

ConstraintSet ConstraintSet::whole_space(const Shape& shape) {
  return {shape,
          [](std::span<const double> in, std::span<double> out) {
            std::copy(in.begin(), in.end(), out.begin());
          },
          false, "whole space"};
}

ConstraintSet ConstraintSet::from_projector(const FneOperator& projector, bool bounded,
                                            std::string description) {
  if (!projector.flags().is_projector)
    throw InvalidParameter("constraint set needs a projector, got '" + projector.kind() + "'");
  if (description.empty()) description = projector.kind();
  return {projector.domain(), projector.map(), bounded, std::move(description)};
}

Prescription make_prescription(LinearOperator linop, FneOperator fne, SpacePoint target,
                               double weight) {
  const double bound = linop.norm_sq();
  return {std::move(linop), std::move(fne), std::move(target), weight, bound};
}

Problem assemble_problem(ConstraintSet constraint, std::vector<Prescription> arms) {
  if (arms.empty()) throw InvalidParameter("problem needs at least one prescription");
  if (!constraint.projector) throw InvalidParameter("constraint set has no projector");
  double total = 0.0;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const auto& a = arms[i];
    const std::string where = "prescription " + std::to_string(i);
    require_same_shape(constraint.shape, a.linop.input_shape(), (where + " operator input").c_str());
    require_same_shape(a.linop.output_shape(), a.target.shape(), (where + " target").c_str());
    require_same_shape(a.linop.output_shape(), a.fne.domain(), (where + " operator domain").c_str());
    if (!(a.weight > 0.0) || !(a.weight <= 1.0))
      throw InvalidParameter(where + ": weight must lie in (0, 1]");
    if (!(a.norm_sq_bound > 0.0) || !std::isfinite(a.norm_sq_bound))
      throw InvalidParameter(where + ": norm bound must be positive and finite");
    total += a.weight;
  }
  const double dev = std::abs(total - 1.0);
  if (dev > 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << total << ", not 1";
    throw WeightSumError(os.str());
  }
  if (dev > 1e-12)
    for (auto& a : arms) a.weight /= total;
  return Problem(std::move(constraint), std::move(arms));
}

SpacePoint prescription_image(const Prescription& arm, const SpacePoint& x) {
  return arm.fne.apply(arm.linop.apply(x));
}

SpacePoint prescription_residual(const Prescription& arm, const SpacePoint& x) {
  return prescription_image(arm, x) - arm.target;
}

SpacePoint weighted_field(const Problem& problem, const SpacePoint& x) {
  require_same_shape(problem.shape(), x.shape(), "weighted field");
  std::vector<double> acc(x.size(), 0.0);
  for (const auto& arm : problem.prescriptions()) {
    const auto g = arm.linop.adjoint(prescription_residual(arm, x));
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += arm.weight * g[k];
  }
  return SpacePoint::unchecked(x.shape(), std::move(acc));
}

double vi_residual(const Problem& problem, const SpacePoint& x, double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw InvalidParameter("theta must be positive");
  const auto g = weighted_field(problem, x);
  const auto moved = problem.constraint().project(axpy(-theta, g, x));
  return distance(x, moved) / (1.0 + x.norm());
}

double inconsistency_bound(const Problem& problem, const SpacePoint& solution, double tol,
                           double theta) {
  const double r = vi_residual(problem, solution, theta);
  if (r > tol) {
    std::ostringstream os;
    os << "inconsistency_bound: point has vi_residual " << r << " > " << tol
       << "; the bound is only an estimate";
    warn(os.str());
  }
  double sum = 0.0;
  for (const auto& arm : problem.prescriptions())
    sum += prescription_residual(arm, solution).squared_norm();
  return std::sqrt(sum);
}

double least_squares_objective(const Problem& problem, const SpacePoint& x) {
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const auto& arm = problem.arm(i);
    const auto& f = arm.fne.flags();
    if (!f.is_residual_projector || !f.has_distance_sq)
      throw UnsupportedObjective("prescription " + std::to_string(i) + " ('" + arm.fne.kind() +
                                 "') is not of the form Id - proj_D");
    for (double v : arm.target.values())
      if (v != 0.0)
        throw UnsupportedObjective("prescription " + std::to_string(i) +
                                   " has a nonzero target");
  }
  double f = 0.0;
  for (const auto& arm : problem.prescriptions())
    f += arm.weight * prescription_image(arm, x).squared_norm();
  return 0.5 * f;
}

} // namespace sigcon
