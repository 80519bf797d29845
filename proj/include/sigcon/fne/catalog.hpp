#pragma once

#include "sigcon/fne/fne_operator.hpp"

#include <cstdint>
#include <vector>

namespace sigcon {

/// Lengths of consecutive coordinate groups; must sum to the space size.
using Partition = std::vector<std::size_t>;

Partition uniform_partition(std::size_t n, std::size_t group_length);
/// One group per block of `shape`.
Partition partition_of(const Shape& shape);

// ---------------------------------------------------------------------------
// Scalar maps.

/// sign(eta) * max(|eta| - gamma, 0); |eta| == gamma maps to 0.
double soft_threshold(double eta, double gamma);
/// eta if |eta| > gamma, else 0.
double hard_threshold(double eta, double gamma);

enum class SoftClipVariant { rational, arctan, exp_sat };

/// Odd saturating maps with range (-1, 1).
double soft_clip(double eta, SoftClipVariant variant);

/// Minimizer of gamma*ln(rho + |.|) + (eta - .)^2 / 2, the prox of the
/// rho^-2-weakly convex log penalty. Requires 0 < gamma < rho^2.
double log_threshold(double eta, double rho, double gamma);

// ---------------------------------------------------------------------------
// Projectors onto closed convex sets.

FneOperator box_projector(const Shape& shape, double lo, double hi);
FneOperator box_projector(const Shape& shape, std::vector<double> lo,
                          std::vector<double> hi);
/// Projector onto { y : ||y||_inf <= rho }.
FneOperator linf_ball_projector(const Shape& shape, double rho);
FneOperator singleton_projector(const SpacePoint& c);
FneOperator nonneg_orthant_projector(const Shape& shape);
/// Projector onto signals constant on each group of `partition`: every group
/// is replaced by its mean.
FneOperator blockwise_constant_projector(const Shape& shape, Partition partition);

/// Id - P for a projector P onto D. The prescription (Id - P) y = 0 encodes
/// y in D, and ||(Id - P) y|| = d_D(y).
FneOperator residual_of(const FneOperator& projector);

// ---------------------------------------------------------------------------
// Proximity operators and other firmly nonexpansive maps.

FneOperator soft_thresholder(const Shape& shape, double gamma);

/// y_j -> (1 - rho_j / max(||y_j||, rho_j)) y_j on each group.
FneOperator group_shrinkage(const Shape& shape, Partition partition,
                            std::vector<double> rho);

FneOperator soft_clipper(const Shape& shape, SoftClipVariant variant);

/// y -> y - (mean(y) - rho) 1, the projector onto the hyperplane of mean rho.
FneOperator mean_adjust(const Shape& shape, double rho);

/// y -> y - IDFT(|DFT y| max(cos(angle(DFT y) - theta), 0) exp(i theta)) on a
/// rows x cols grid. Per frequency bin the subtracted term is the projection
/// of the bin onto the ray of angle theta, so the map is Id minus a projector
/// and vanishes exactly when every nonzero bin has phase theta. `theta` must be
/// odd under frequency negation (angles of a real signal's spectrum).
FneOperator phase_prescription(std::size_t rows, std::size_t cols,
                               std::vector<double> theta);

/// Checks that theta is the phase field of a real signal's DFT: entries in
/// [-pi, pi] and theta(-k) = -theta(k) mod 2 pi. Throws InvalidParameter.
void validate_phase_field(std::size_t rows, std::size_t cols,
                          const std::vector<double>& theta);

/// (Id + R_1 o ... o R_m) / 2. Each R_j is declared nonexpansive; the
/// composition is spot-checked on 200 seeded random pairs and rejected with
/// InvalidParameter if it expands distances.
FneOperator averaged_composition(std::vector<NonexpansiveMap> maps,
                                 std::uint64_t seed = 0);

/// Soft-thresholds the singular values of a rows x cols matrix at rho.
FneOperator svd_soft_threshold(std::size_t rows, std::size_t cols, double rho);

/// (1 - gamma / (4 beta)) (Id - J o (Id - gamma B)) for a firmly nonexpansive
/// resolvent J of a maximally monotone A and a beta-cocoercive B. Its zeros
/// are zer(A + B). Requires 0 < gamma < 2 beta.
FneOperator forward_backward_fne(const FneOperator& resolvent, VectorMap cocoercive,
                                 double beta, double gamma);

// ---------------------------------------------------------------------------
// Weakly convex proximal maps and their rescaling.

/// Q = argmin gamma g + ||. - y||^2 / 2 for a mu-weakly convex g with
/// gamma mu < 1. Q is (1 - gamma mu)-cocoercive, not firmly nonexpansive.
struct WeaklyConvexProx {
  std::string name;
  Shape domain;
  VectorMap map;
  double mu = 0.0;
  double gamma = 0.0;

  double cocoercivity() const { return 1.0 - gamma * mu; }
  SpacePoint apply(const SpacePoint& y) const;
};

/// Componentwise log_threshold, g = ln(rho + |.|), mu = rho^-2.
WeaklyConvexProx log_threshold_prox(const Shape& shape, double rho, double gamma);

/// beta Q as a firmly nonexpansive operator. Requires 0 < beta <= 1 - gamma mu.
FneOperator scale_to_fne(const WeaklyConvexProx& q, double beta);
/// Id - beta Q, firmly nonexpansive under the same condition.
FneOperator scaled_complement(const WeaklyConvexProx& q, double beta);

} // namespace sigcon
