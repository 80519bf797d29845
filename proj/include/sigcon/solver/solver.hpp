#pragma once

#include "sigcon/core/problem.hpp"
#include "sigcon/solver/schedule.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sigcon {

enum class TInitPolicy {
  /// t_{i,-1} = x0.
  copy_x0,
  /// t_{i,-1} = x0 - gamma_i L_i^*(F_i(L_i x0) - p_i).
  one_step,
};

/// Weights used to average the block terms t_i.
enum class Averaging {
  /// w_i ||L_i||^2 / sum_j w_j ||L_j||^2. With steps gamma / ||L_i||^2 the
  /// fixed points are exactly the solutions of the weighted inequality.
  balanced,
  /// w_i as given. Fixed points then solve the inequality reweighted by
  /// w_i / ||L_i||^2; the two coincide when all norm bounds are equal.
  literal,
};

struct SolverConfig {
  /// Relaxation in (0, 2); arm i steps with gamma / norm_sq_bound_i.
  double gamma = 1.0;
  std::size_t max_iters = 1000;
  /// Stop once vi_residual <= tol (checked every trace_every iterations).
  double tol = 1e-6;
  std::size_t trace_every = 1;
  /// Defaults to the zero point.
  std::optional<SpacePoint> x0;
  TInitPolicy t_init = TInitPolicy::copy_x0;
  /// Scale inside vi_residual.
  double theta = 1.0;
  /// Keep x_n at every trace record (for relative-error traces).
  bool keep_snapshots = false;
  /// Record ||F_i(L_i x_n) - p_i|| per arm at every trace record.
  bool record_gaps = false;
  Averaging averaging = Averaging::balanced;
};

/// Averaging weights for `problem` under `mode`, summing to one.
std::vector<double> averaging_weights(const Problem& problem, Averaging mode);

/// Throws InvalidParameter unless gamma lies in (0, 2) and the remaining
/// fields are usable.
void validate_config(const SolverConfig& config);

struct TraceRecord {
  std::size_t n = 0;
  double seconds = 0.0;
  double residual = 0.0;
  /// ||x_n - x_{n-1}||; zero at n = 0.
  double step_norm = 0.0;
  /// Position of I_{n-1} inside the schedule period.
  std::size_t active_set_id = 0;
  IndexSet active;
  std::vector<double> gaps;
};

struct SolverTrace {
  std::vector<TraceRecord> records;
  /// x_n at each record when snapshots are kept, parallel to records.
  std::vector<SpacePoint> snapshots;
};

enum class SolveStatus { converged, max_iters };
std::string to_string(SolveStatus status);

/// x_n together with the stale block terms t_{i,n-1}.
struct SolverState {
  std::size_t n = 0;
  SpacePoint x;
  std::vector<SpacePoint> t;
};

SolverState initial_state(const Problem& problem, const SolverConfig& config);

/// One iteration: for i in I_n, t_i = x_n - gamma_i L_i^*(F_i(L_i x_n) - p_i);
/// other t_i stay as they are; x_{n+1} = proj_C(sum_i a_i t_i) with the
/// averaging weights a_i of config.averaging.
SolverState step(const SolverState& state, const Problem& problem, const IndexSet& active,
                 const SolverConfig& config);

struct SolveResult {
  SpacePoint solution;
  SolverTrace trace;
  SolveStatus status = SolveStatus::max_iters;
  std::size_t iterations = 0;
  double residual = 0.0;
};

SolveResult solve(const Problem& problem, const ActivationSchedule& schedule,
                  const SolverConfig& config);

} // namespace sigcon
