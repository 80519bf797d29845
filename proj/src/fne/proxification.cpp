#include "sigcon/fne/proxification.hpp"

#include "sigcon/core/errors.hpp"
#include "sigcon/core/log.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace sigcon {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Relative level below which a singular value counts as zero.
constexpr double kRankTol = 1e-10;
// Relative level below which a distance to a set counts as membership.
constexpr double kMembershipTol = 1e-12;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidParameter(std::string(what) + " must be positive and finite");
}

struct Svd {
  Eigen::MatrixXd u, v;
  Eigen::VectorXd s;
};

Svd svd_of(const SpacePoint& y) {
  if (!y.shape().is_single_grid())
    throw ShapeMismatch("singular value maps need a single matrix-shaped block");
  const auto& b = y.shape().block(0);
  Eigen::Map<const RowMatrix> m(y.values().data(), b.rows, b.cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
}

SpacePoint rebuild(const SpacePoint& like, const Svd& f, const Eigen::VectorXd& s) {
  const auto& b = like.shape().block(0);
  std::vector<double> out(like.size());
  Eigen::Map<RowMatrix>(out.data(), b.rows, b.cols) =
      f.u * s.asDiagonal() * f.v.transpose();
  return SpacePoint::unchecked(like.shape(), std::move(out));
}

struct GroupSet {
  Partition partition;
  std::vector<FneOperator> sets;
  std::vector<double> gammas;
};

void check_groups(const SpacePoint& y, const Partition& p,
                  const std::vector<FneOperator>& sets, const std::vector<double>& gammas) {
  std::size_t total = 0;
  for (auto len : p) total += len;
  if (total != y.size()) throw ShapeMismatch("partition does not cover the point");
  if (sets.size() != p.size() || gammas.size() != p.size())
    throw InvalidParameter("block thresholding needs one set and one gamma per group");
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!sets[j].flags().is_projector)
      throw InvalidParameter("block thresholding sets must be given by projectors");
    if (sets[j].domain().size() != p[j])
      throw ShapeMismatch("set " + std::to_string(j) + " does not match its group size");
    require_positive(gammas[j], "block threshold gamma");
  }
}

// Applies `f(block, projection, distance, gamma, out)` to every group.
template <class F>
SpacePoint per_group(const SpacePoint& y, const Partition& p,
                     const std::vector<FneOperator>& sets,
                     const std::vector<double>& gammas, F f) {
  check_groups(y, p, sets, gammas);
  std::vector<double> out(y.size());
  std::size_t off = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    auto block = y.values().subspan(off, p[j]);
    std::vector<double> proj(p[j]);
    sets[j].apply_to(block, proj);
    double d2 = 0.0;
    for (std::size_t i = 0; i < p[j]; ++i) d2 += (block[i] - proj[i]) * (block[i] - proj[i]);
    f(block, proj, std::sqrt(d2), gammas[j], std::span<double>(out).subspan(off, p[j]));
    off += p[j];
  }
  return SpacePoint::unchecked(y.shape(), std::move(out));
}

bool in_set(double distance, std::span<const double> block) {
  return distance <= kMembershipTol * (1.0 + std::sqrt(squared_norm(block)));
}

} // namespace

SpacePoint hard_threshold_map(const SpacePoint& y, double gamma) {
  require_positive(gamma, "hard threshold gamma");
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = hard_threshold(y[i], gamma);
  return SpacePoint::unchecked(y.shape(), std::move(out));
}

SpacePoint block_threshold_map(const SpacePoint& y, const Partition& partition,
                               const std::vector<FneOperator>& sets,
                               const std::vector<double>& gammas) {
  return per_group(y, partition, sets, gammas,
                   [](auto block, const auto& proj, double d, double g, auto out) {
                     for (std::size_t i = 0; i < out.size(); ++i)
                       out[i] = d > g ? block[i] : proj[i];
                   });
}

SpacePoint block_shrink_map(const SpacePoint& y, const Partition& partition,
                            const std::vector<FneOperator>& sets,
                            const std::vector<double>& gammas) {
  return per_group(y, partition, sets, gammas,
                   [](auto block, const auto& proj, double d, double g, auto out) {
                     const bool inside = in_set(d, block);
                     for (std::size_t i = 0; i < out.size(); ++i)
                       out[i] = inside ? block[i] : block[i] + (g / d) * (proj[i] - block[i]);
                   });
}

std::vector<double> singular_values(const SpacePoint& matrix) {
  const auto f = svd_of(matrix);
  return {f.s.data(), f.s.data() + f.s.size()};
}

SpacePoint svd_hard_threshold_map(const SpacePoint& y, double rho) {
  require_positive(rho, "singular value threshold");
  auto f = svd_of(y);
  Eigen::VectorXd s = f.s;
  for (Eigen::Index k = 0; k < s.size(); ++k) s[k] = hard_threshold(s[k], rho);
  return rebuild(y, f, s);
}

SpacePoint svd_shrink_map(const SpacePoint& y, double rho) {
  require_positive(rho, "singular value threshold");
  auto f = svd_of(y);
  const double zero = kRankTol * (f.s.size() ? f.s[0] : 0.0);
  Eigen::VectorXd s = f.s;
  for (Eigen::Index k = 0; k < s.size(); ++k) s[k] = s[k] > zero ? s[k] - rho : 0.0;
  return rebuild(y, f, s);
}

double root_observation(double eta, double rho) {
  if (std::abs(eta) <= rho) return 0.0;
  return std::copysign(std::sqrt(eta * eta - rho * rho), eta);
}

double root_shrink(double eta, double rho) {
  if (eta == 0.0) return 0.0;
  return std::copysign(std::sqrt(eta * eta + rho * rho) - rho, eta);
}

double quartic_root_threshold(double eta, double rho) {
  if (std::abs(eta) <= rho) return 0.0;
  const double e2 = eta * eta, r2 = rho * rho;
  return std::copysign(std::sqrt(std::sqrt(e2 * e2 - r2 * r2)), eta);
}

Proxification proxify_hard_threshold(double gamma, const SpacePoint& q) {
  require_positive(gamma, "hard threshold gamma");
  std::vector<double> p(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double v = q[i];
    if (v != 0.0 && std::abs(v) <= gamma)
      throw NotInRange("entry " + std::to_string(i) + " = " + std::to_string(v) +
                       " is not in the range of the hard thresholder (0 or |.| > gamma)");
    p[i] = v == 0.0 ? 0.0 : v - std::copysign(gamma, v);
  }
  return {soft_thresholder(q.shape(), gamma), SpacePoint(q.shape(), std::move(p))};
}

Proxification proxify_block_threshold(std::vector<FneOperator> sets,
                                      std::vector<double> gammas, const SpacePoint& q) {
  return proxify_block_threshold(partition_of(q.shape()), std::move(sets),
                                 std::move(gammas), q);
}

Proxification proxify_block_threshold(Partition partition, std::vector<FneOperator> sets,
                                      std::vector<double> gammas, const SpacePoint& q) {
  check_groups(q, partition, sets, gammas);
  // Range check: q_j in D_j or d_{D_j}(q_j) > gamma_j.
  per_group(q, partition, sets, gammas,
            [](auto block, const auto&, double d, double g, auto) {
              if (!in_set(d, block) && !(d > g))
                throw NotInRange("block at distance " + std::to_string(d) +
                                 " from its set is not in the range of the block "
                                 "thresholder (needs 0 or > " + std::to_string(g) + ")");
            });
  auto target = block_shrink_map(q, partition, sets, gammas);

  std::vector<VectorMap> projectors;
  for (const auto& s : sets) projectors.push_back(s.map());
  nlohmann::json params{{"partition", partition}, {"gammas", gammas}};
  FneOperator fne(
      "block_threshold", q.shape(),
      [partition, projectors, gammas](std::span<const double> in, std::span<double> out) {
        // S_j o Q_j collapses to y + min(1, gamma / d) (proj y - y).
        std::size_t off = 0;
        for (std::size_t j = 0; j < partition.size(); ++j) {
          auto block = in.subspan(off, partition[j]);
          auto o = out.subspan(off, partition[j]);
          projectors[j](block, o);
          double d2 = 0.0;
          for (std::size_t i = 0; i < o.size(); ++i) d2 += (block[i] - o[i]) * (block[i] - o[i]);
          const double d = std::sqrt(d2);
          const double t = d > gammas[j] ? gammas[j] / d : 1.0;
          for (std::size_t i = 0; i < o.size(); ++i) o[i] = block[i] + t * (o[i] - block[i]);
          off += partition[j];
        }
      },
      FneFlags{}, std::move(params));
  return {std::move(fne), SpacePoint(q.shape(), target.to_vector())};
}

Proxification proxify_svd(double rho, const SpacePoint& q) {
  require_positive(rho, "singular value threshold");
  const auto s = singular_values(q);
  const double zero = kRankTol * (s.empty() ? 0.0 : s[0]);
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] > zero && s[k] <= rho)
      throw NotInRange("singular value " + std::to_string(k + 1) + " = " +
                       std::to_string(s[k]) + " lies in (0, rho]; q is not a "
                       "thresholded matrix at this rho");
  }
  const auto& b = q.shape().block(0);
  return {svd_soft_threshold(b.rows, b.cols, rho),
          SpacePoint(q.shape(), svd_shrink_map(q, rho).to_vector())};
}

double rank_to_threshold(const SpacePoint& q, std::size_t r) {
  const auto s = singular_values(q);
  if (r == 0 || r > s.size())
    throw InvalidParameter("rank must lie in [1, min(rows, cols)]");
  const double zero = kRankTol * (s.empty() ? 0.0 : s[0]);
  if (!(s[r - 1] > zero))
    throw RankDeficient("sigma_" + std::to_string(r) + " of the compression is zero");
  if (r < s.size() && s[r] > zero)
    warn("rank_to_threshold: the compression has rank above " + std::to_string(r));
  return 0.99 * s[r - 1];
}

Proxification proxify_root(double rho, double chi) {
  return proxify_root(rho, SpacePoint::vector({chi}));
}

Proxification proxify_root(double rho, const SpacePoint& chi) {
  require_positive(rho, "root threshold rho");
  std::vector<double> p(chi.size());
  for (std::size_t i = 0; i < chi.size(); ++i) p[i] = root_shrink(chi[i], rho);
  return {soft_thresholder(chi.shape(), rho), SpacePoint(chi.shape(), std::move(p))};
}

} // namespace sigcon
