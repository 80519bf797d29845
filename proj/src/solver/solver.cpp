#include "sigcon/solver/solver.hpp"

#include "sigcon/core/errors.hpp"

#include <chrono>
#include <cmath>

namespace sigcon {

std::string to_string(SolveStatus status) {
  return status == SolveStatus::converged ? "converged" : "max_iters";
}

void validate_config(const SolverConfig& c) {
  if (!(c.gamma > 0.0 && c.gamma < 2.0))
    throw InvalidParameter("gamma must lie in the open interval (0, 2), got " +
                           std::to_string(c.gamma));
  if (!(c.tol >= 0.0)) throw InvalidParameter("tol must be nonnegative");
  if (c.trace_every == 0) throw InvalidParameter("trace_every must be positive");
  if (!(c.theta > 0.0) || !std::isfinite(c.theta))
    throw InvalidParameter("theta must be positive");
}

std::vector<double> averaging_weights(const Problem& problem, Averaging mode) {
  std::vector<double> a;
  for (const auto& arm : problem.prescriptions())
    a.push_back(mode == Averaging::balanced ? arm.weight * arm.norm_sq_bound : arm.weight);
  double total = 0.0;
  for (double v : a) total += v;
  for (auto& v : a) v /= total;
  return a;
}

namespace {

// Scratch buffers for one arm: L x and F(L x).
struct ArmScratch {
  std::vector<double> lx, flx;
};

class Engine {
public:
  Engine(const Problem& p, const SolverConfig& c)
      : problem_(p), config_(c), weights_(averaging_weights(p, c.averaging)) {
    for (const auto& arm : p.prescriptions()) {
      const auto m = arm.linop.output_shape().size();
      scratch_.push_back({std::vector<double>(m), std::vector<double>(m)});
    }
  }

  // out = x - gamma_i L_i^*(F_i(L_i x) - p_i)
  void arm_update(std::size_t i, std::span<const double> x, std::vector<double>& out) {
    const auto& arm = problem_.arm(i);
    auto& s = scratch_[i];
    arm.linop.apply_to(x, s.lx);
    arm.fne.apply_to(s.lx, s.flx);
    const auto p = arm.target.values();
    for (std::size_t k = 0; k < s.flx.size(); ++k) s.flx[k] -= p[k];
    out.resize(x.size());
    arm.linop.adjoint_to(s.flx, out);
    const double g = config_.gamma / arm.norm_sq_bound;
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] - g * out[k];
  }

  SpacePoint combine(const std::vector<SpacePoint>& t) const {
    const auto& shape = problem_.shape();
    std::vector<double> sum(shape.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double w = weights_[i];
      const auto v = t[i].values();
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += w * v[k];
    }
    std::vector<double> out(sum.size());
    problem_.constraint().projector(sum, out);
    return SpacePoint::unchecked(shape, std::move(out));
  }

  void advance(SolverState& s, const IndexSet& active) {
    std::vector<double> buf;
    for (auto i : active) {
      if (i >= s.t.size()) throw InvalidParameter("activation index out of range");
      arm_update(i, s.x.values(), buf);
      s.t[i] = SpacePoint::unchecked(problem_.shape(), std::move(buf));
      buf = {};
    }
    s.x = combine(s.t);
    ++s.n;
  }

private:
  const Problem& problem_;
  const SolverConfig& config_;
  std::vector<double> weights_;
  std::vector<ArmScratch> scratch_;
};

void check_state(const SolverState& s, const Problem& p) {
  require_same_shape(p.shape(), s.x.shape(), "solver state");
  if (s.t.size() != p.size())
    throw ShapeMismatch("solver state holds " + std::to_string(s.t.size()) +
                        " block terms for " + std::to_string(p.size()) + " prescriptions");
  for (const auto& t : s.t) require_same_shape(p.shape(), t.shape(), "solver block term");
}

std::vector<double> arm_gaps(const Problem& p, const SpacePoint& x) {
  std::vector<double> g;
  for (const auto& arm : p.prescriptions()) g.push_back(prescription_residual(arm, x).norm());
  return g;
}

} // namespace

SolverState initial_state(const Problem& problem, const SolverConfig& config) {
  validate_config(config);
  SpacePoint x0 = config.x0 ? *config.x0 : SpacePoint::zeros(problem.shape());
  require_same_shape(problem.shape(), x0.shape(), "initial point");
  SolverState s{0, x0, {}};
  if (config.t_init == TInitPolicy::copy_x0) {
    s.t.assign(problem.size(), x0);
  } else {
    Engine e(problem, config);
    std::vector<double> buf;
    for (std::size_t i = 0; i < problem.size(); ++i) {
      e.arm_update(i, x0.values(), buf);
      s.t.push_back(SpacePoint::unchecked(problem.shape(), buf));
    }
  }
  return s;
}

SolverState step(const SolverState& state, const Problem& problem, const IndexSet& active,
                 const SolverConfig& config) {
  validate_config(config);
  check_state(state, problem);
  if (active.empty()) throw EmptyBlock("empty activation set");
  SolverState next = state;
  Engine(problem, config).advance(next, active);
  return next;
}

SolveResult solve(const Problem& problem, const ActivationSchedule& schedule,
                  const SolverConfig& config) {
  validate_config(config);
  if (schedule.index_count() != problem.size())
    throw InvalidParameter("schedule covers " + std::to_string(schedule.index_count()) +
                           " indices but the problem has " + std::to_string(problem.size()) +
                           " prescriptions");
  validate_schedule(schedule, problem.size());

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  SolverState s = initial_state(problem, config);
  Engine engine(problem, config);
  SolveResult result{s.x, {}, SolveStatus::max_iters, 0, 0.0};

  auto record = [&](double step_norm, std::size_t set_id, const IndexSet& active) {
    TraceRecord r;
    r.n = s.n;
    r.residual = vi_residual(problem, s.x, config.theta);
    r.step_norm = step_norm;
    r.active_set_id = set_id;
    r.active = active;
    if (config.record_gaps) r.gaps = arm_gaps(problem, s.x);
    r.seconds = elapsed();
    result.trace.records.push_back(std::move(r));
    if (config.keep_snapshots) result.trace.snapshots.push_back(s.x);
    return result.trace.records.back().residual;
  };

  double residual = record(0.0, 0, {});
  while (residual > config.tol && s.n < config.max_iters) {
    const auto set_id = schedule.set_id(s.n);
    const auto& active = schedule.active(s.n);
    const SpacePoint prev = s.x;
    engine.advance(s, active);
    if (!s.x.all_finite())
      throw InvalidParameter("iterate became non-finite at n = " + std::to_string(s.n));
    if (s.n % config.trace_every == 0 || s.n == config.max_iters)
      residual = record(distance(prev, s.x), set_id, active);
  }

  result.solution = s.x;
  result.iterations = s.n;
  result.residual = residual;
  result.status = residual <= config.tol ? SolveStatus::converged : SolveStatus::max_iters;
  return result;
}

} // namespace sigcon
