#pragma once

#include "sigcon/fne/catalog.hpp"
#include "sigcon/fne/fne_operator.hpp"

#include <vector>

namespace sigcon {

/// A pair (F, p) with F firmly nonexpansive whose solution set {y : F y = p}
/// equals {y : Q y = q} for a source equation Q y = q.
struct Proxification {
  FneOperator fne;
  SpacePoint target;
};

// ---------------------------------------------------------------------------
// Source observation maps Q (discontinuous or non-Lipschitz) and the
// shrinkage maps S used to build F = S o Q.

SpacePoint hard_threshold_map(const SpacePoint& y, double gamma);

/// Per group j: y_j if d_{D_j}(y_j) > gamma_j, else proj_{D_j} y_j.
SpacePoint block_threshold_map(const SpacePoint& y, const Partition& partition,
                               const std::vector<FneOperator>& sets,
                               const std::vector<double>& gammas);
/// Per group j: y_j + gamma_j / d_{D_j}(y_j) (proj_{D_j} y_j - y_j) outside
/// D_j, identity inside.
SpacePoint block_shrink_map(const SpacePoint& y, const Partition& partition,
                            const std::vector<FneOperator>& sets,
                            const std::vector<double>& gammas);

/// Singular values of a single-grid point, in descending order.
std::vector<double> singular_values(const SpacePoint& matrix);
/// Hard-thresholds singular values at rho.
SpacePoint svd_hard_threshold_map(const SpacePoint& y, double rho);
/// Shrinks every nonzero singular value by rho.
SpacePoint svd_shrink_map(const SpacePoint& y, double rho);

/// sign(eta) sqrt(eta^2 - rho^2) for |eta| > rho, else 0.
double root_observation(double eta, double rho);
/// sign(eta) (sqrt(eta^2 + rho^2) - rho); root_shrink o root_observation is
/// the soft thresholder at rho.
double root_shrink(double eta, double rho);
/// sign(eta) (eta^4 - rho^4)^(1/4) for |eta| > rho, else 0. Data-generation
/// model that root_observation deliberately misspecifies.
double quartic_root_threshold(double eta, double rho);

// ---------------------------------------------------------------------------
// Proxifications.

/// Q = componentwise hard thresholder at gamma. Every entry of q must be 0 or
/// exceed gamma in magnitude (NotInRange otherwise).
Proxification proxify_hard_threshold(double gamma, const SpacePoint& q);

/// Q = block_threshold_map. Each q_j must lie in D_j or satisfy
/// d_{D_j}(q_j) > gamma_j (NotInRange otherwise).
Proxification proxify_block_threshold(std::vector<FneOperator> sets,
                                      std::vector<double> gammas, const SpacePoint& q);
Proxification proxify_block_threshold(Partition partition, std::vector<FneOperator> sets,
                                      std::vector<double> gammas, const SpacePoint& q);

/// Q = svd_hard_threshold_map. Every singular value of q must be 0 or > rho.
Proxification proxify_svd(double rho, const SpacePoint& q);

/// Threshold 0.99 sigma_r(q) for a rank-r compression q. RankDeficient when
/// sigma_r(q) vanishes.
double rank_to_threshold(const SpacePoint& q, std::size_t r);

/// Q = root_observation; any real observation is in its range.
Proxification proxify_root(double rho, double chi);
Proxification proxify_root(double rho, const SpacePoint& chi);

} // namespace sigcon
