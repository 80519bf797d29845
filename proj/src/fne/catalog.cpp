#include "sigcon/fne/catalog.hpp"

#include "sigcon/core/errors.hpp"
#include "sigcon/core/random.hpp"
#include "sigcon/linops/fourier.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace sigcon {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidParameter(std::string(what) + " must be positive and finite");
}

void check_partition(const Shape& shape, const Partition& p) {
  if (p.empty()) throw InvalidParameter("partition must be nonempty");
  std::size_t total = 0;
  for (auto len : p) {
    if (len == 0) throw InvalidParameter("partition groups must be nonempty");
    total += len;
  }
  if (total != shape.size())
    throw InvalidParameter("partition covers " + std::to_string(total) +
                           " coordinates but the space has " +
                           std::to_string(shape.size()));
}

template <class F>
VectorMap elementwise(F f) {
  return [f](std::span<const double> in, std::span<double> out) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = f(in[i]);
  };
}

std::vector<double> expand(const Shape& shape, std::vector<double> v, const char* what) {
  if (v.size() == 1) return std::vector<double>(shape.size(), v[0]);
  if (v.size() != shape.size())
    throw InvalidParameter(std::string(what) + " has the wrong length");
  return v;
}

} // namespace

Partition uniform_partition(std::size_t n, std::size_t group_length) {
  if (group_length == 0 || n % group_length != 0)
    throw InvalidParameter("group length must divide the signal length");
  return Partition(n / group_length, group_length);
}

Partition partition_of(const Shape& shape) {
  Partition p;
  for (const auto& b : shape.blocks()) p.push_back(b.size());
  return p;
}

double soft_threshold(double eta, double gamma) {
  const double m = std::abs(eta) - gamma;
  if (m <= 0.0) return 0.0;
  return std::copysign(m, eta);
}

double hard_threshold(double eta, double gamma) {
  return std::abs(eta) > gamma ? eta : 0.0;
}

double soft_clip(double eta, SoftClipVariant variant) {
  switch (variant) {
  case SoftClipVariant::rational: return eta / (1.0 + std::abs(eta));
  case SoftClipVariant::arctan: return 2.0 * std::atan(eta) / std::numbers::pi;
  case SoftClipVariant::exp_sat:
    return std::copysign(-std::expm1(-std::abs(eta)), eta);
  }
  return 0.0;
}

double log_threshold(double eta, double rho, double gamma) {
  require_positive(rho, "log threshold rho");
  require_positive(gamma, "log threshold gamma");
  if (gamma >= rho * rho)
    throw InvalidParameter("log threshold requires gamma < rho^2 (gamma mu < 1)");
  const double knee = gamma / rho;
  if (eta > knee) {
    const double s = eta + rho;
    return 0.5 * (eta - rho + std::sqrt(s * s - 4.0 * gamma));
  }
  if (eta < -knee) {
    const double s = eta - rho;
    return 0.5 * (eta + rho - std::sqrt(s * s - 4.0 * gamma));
  }
  return 0.0;
}

FneOperator box_projector(const Shape& shape, double lo, double hi) {
  return box_projector(shape, std::vector<double>{lo}, std::vector<double>{hi});
}

FneOperator box_projector(const Shape& shape, std::vector<double> lo,
                          std::vector<double> hi) {
  const bool scalar = lo.size() == 1 && hi.size() == 1;
  nlohmann::json params = scalar ? nlohmann::json{{"lo", lo[0]}, {"hi", hi[0]}}
                                 : nlohmann::json{{"lo", lo}, {"hi", hi}};
  lo = expand(shape, std::move(lo), "box lower bound");
  hi = expand(shape, std::move(hi), "box upper bound");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i])) throw InvalidParameter("box requires lo <= hi componentwise");
  return FneOperator(
      "box", shape,
      [lo = std::move(lo), hi = std::move(hi)](std::span<const double> in,
                                               std::span<double> out) {
        for (std::size_t i = 0; i < in.size(); ++i)
          out[i] = std::min(std::max(in[i], lo[i]), hi[i]);
      },
      FneFlags{.is_projector = true}, std::move(params));
}

FneOperator linf_ball_projector(const Shape& shape, double rho) {
  require_positive(rho, "l-infinity ball radius");
  return FneOperator("linf_ball", shape,
                     elementwise([rho](double v) { return std::clamp(v, -rho, rho); }),
                     FneFlags{.is_projector = true}, {{"rho", rho}});
}

FneOperator singleton_projector(const SpacePoint& c) {
  auto values = c.to_vector();
  return FneOperator(
      "singleton", c.shape(),
      [values](std::span<const double>, std::span<double> out) {
        std::copy(values.begin(), values.end(), out.begin());
      },
      FneFlags{.is_projector = true}, {{"point", values}});
}

FneOperator nonneg_orthant_projector(const Shape& shape) {
  return FneOperator("nonneg_orthant", shape,
                     elementwise([](double v) { return std::max(v, 0.0); }),
                     FneFlags{.is_projector = true});
}

FneOperator blockwise_constant_projector(const Shape& shape, Partition partition) {
  check_partition(shape, partition);
  nlohmann::json params{{"partition", partition}};
  return FneOperator(
      "blockwise_constant", shape,
      [p = std::move(partition)](std::span<const double> in, std::span<double> out) {
        std::size_t off = 0;
        for (auto len : p) {
          double mean = 0.0;
          for (std::size_t i = off; i < off + len; ++i) mean += in[i];
          mean /= static_cast<double>(len);
          for (std::size_t i = off; i < off + len; ++i) out[i] = mean;
          off += len;
        }
      },
      FneFlags{.is_projector = true}, std::move(params));
}

FneOperator residual_of(const FneOperator& projector) {
  if (!projector.flags().is_projector)
    throw InvalidParameter("residual_of needs a projector, got '" +
                           projector.kind() + "'");
  auto p = projector.map();
  return FneOperator(
      "residual", projector.domain(),
      [p](std::span<const double> in, std::span<double> out) {
        p(in, out);
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] - out[i];
      },
      FneFlags{.is_residual_projector = true, .has_distance_sq = true},
      {{"of", projector.to_json()}});
}

FneOperator soft_thresholder(const Shape& shape, double gamma) {
  require_positive(gamma, "soft threshold gamma");
  return FneOperator("soft_threshold", shape,
                     elementwise([gamma](double v) { return soft_threshold(v, gamma); }),
                     FneFlags{}, {{"gamma", gamma}});
}

FneOperator group_shrinkage(const Shape& shape, Partition partition,
                            std::vector<double> rho) {
  check_partition(shape, partition);
  if (rho.size() == 1) rho.assign(partition.size(), rho[0]);
  if (rho.size() != partition.size())
    throw InvalidParameter("group shrinkage needs one rho per group");
  for (double r : rho) require_positive(r, "group shrinkage rho");
  nlohmann::json params{{"partition", partition}, {"rho", rho}};
  return FneOperator(
      "group_shrinkage", shape,
      [p = std::move(partition), rho = std::move(rho)](std::span<const double> in,
                                                       std::span<double> out) {
        std::size_t off = 0;
        for (std::size_t g = 0; g < p.size(); ++g) {
          const auto block = in.subspan(off, p[g]);
          const double nrm = std::sqrt(squared_norm(block));
          const double scale = 1.0 - rho[g] / std::max(nrm, rho[g]);
          for (std::size_t i = 0; i < p[g]; ++i) out[off + i] = scale * block[i];
          off += p[g];
        }
      },
      FneFlags{}, std::move(params));
}

FneOperator soft_clipper(const Shape& shape, SoftClipVariant variant) {
  static constexpr const char* names[] = {"rational", "arctan", "exp_sat"};
  return FneOperator("soft_clip", shape,
                     elementwise([variant](double v) { return soft_clip(v, variant); }),
                     FneFlags{}, {{"variant", names[static_cast<int>(variant)]}});
}

FneOperator mean_adjust(const Shape& shape, double rho) {
  if (!std::isfinite(rho)) throw InvalidParameter("mean target must be finite");
  return FneOperator(
      "mean_adjust", shape,
      [rho](std::span<const double> in, std::span<double> out) {
        const double mean =
            std::accumulate(in.begin(), in.end(), 0.0) / static_cast<double>(in.size());
        const double shift = mean - rho;
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] - shift;
      },
      FneFlags{.is_projector = true}, {{"rho", rho}});
}

void validate_phase_field(std::size_t rows, std::size_t cols,
                          const std::vector<double>& theta) {
  if (theta.size() != rows * cols)
    throw InvalidParameter("phase field size does not match the grid");
  constexpr double tol = 1e-9;
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t l = 0; l < cols; ++l) {
      const double t = theta[k * cols + l];
      if (!std::isfinite(t) || std::abs(t) > std::numbers::pi + tol)
        throw InvalidParameter("phase entries must lie in [-pi, pi]");
      const std::size_t kk = (rows - k) % rows;
      const std::size_t ll = (cols - l) % cols;
      const double partner = theta[kk * cols + ll];
      double d = std::remainder(t + partner, two_pi);
      if (std::abs(d) > tol)
        throw InvalidParameter("phase field is not odd under frequency negation at bin (" +
                               std::to_string(k) + ", " + std::to_string(l) +
                               "); the prescription would not be real");
    }
  }
}

FneOperator phase_prescription(std::size_t rows, std::size_t cols,
                               std::vector<double> theta) {
  validate_phase_field(rows, cols, theta);
  std::vector<fourier::Complex> ray(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) ray[i] = std::polar(1.0, theta[i]);
  return FneOperator(
      "phase", Shape::grid(rows, cols),
      [rows, cols, ray = std::move(ray)](std::span<const double> in,
                                         std::span<double> out) {
        auto spectrum = fourier::dft2_real(rows, cols, in);
        for (std::size_t i = 0; i < spectrum.size(); ++i) {
          // |Y| cos(angle(Y) - theta) = Re(Y conj(e^{i theta})); a zero bin
          // contributes nothing whatever its nominal angle.
          const double along = std::real(spectrum[i] * std::conj(ray[i]));
          spectrum[i] = std::max(along, 0.0) * ray[i];
        }
        const auto proj = fourier::idft2(rows, cols, spectrum);
        double imag = 0.0, total = 0.0;
        for (std::size_t i = 0; i < proj.size(); ++i) {
          imag += std::norm(proj[i].imag());
          total += in[i] * in[i];
          out[i] = in[i] - proj[i].real();
        }
        if (std::sqrt(imag) > 1e-9 * (1.0 + std::sqrt(total)))
          throw InvalidParameter("phase prescription produced a non-real signal");
      },
      FneFlags{.is_residual_projector = true, .has_distance_sq = true},
      {{"rows", rows}, {"cols", cols}});
}

FneOperator averaged_composition(std::vector<NonexpansiveMap> maps, std::uint64_t seed) {
  if (maps.empty()) throw InvalidParameter("averaged composition needs at least one map");
  const Shape shape = maps.front().domain;
  std::string names;
  for (const auto& m : maps) {
    require_same_shape(shape, m.domain, "averaged composition");
    if (!names.empty()) names += " o ";
    names += m.name;
  }

  // R_1 o ... o R_m: apply the last map first.
  auto compose = [maps](std::span<const double> in, std::span<double> out) {
    std::vector<double> a(in.begin(), in.end()), b(in.size());
    for (auto it = maps.rbegin(); it != maps.rend(); ++it) {
      it->fn(a, b);
      a.swap(b);
    }
    std::copy(a.begin(), a.end(), out.begin());
  };

  CounterRng rng(seed, 0xa7e4a9edULL);
  const std::size_t n = shape.size();
  std::vector<double> rx(n), ry(n);
  for (int trial = 0; trial < 200; ++trial) {
    const double scale = std::pow(10.0, rng.uniform(-2.0, 2.0));
    auto x = rng.normal_vector(n);
    auto y = rng.normal_vector(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] *= scale;
      y[i] *= scale;
    }
    compose(x, rx);
    compose(y, ry);
    double dxy = 0.0, dr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dxy += (x[i] - y[i]) * (x[i] - y[i]);
      dr += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    }
    if (std::sqrt(dr) > std::sqrt(dxy) * (1.0 + 1e-9) + 1e-12)
      throw InvalidParameter("composition " + names + " is not nonexpansive");
  }

  return FneOperator(
      "averaged_composition", shape,
      [compose](std::span<const double> in, std::span<double> out) {
        compose(in, out);
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = 0.5 * (in[i] + out[i]);
      },
      FneFlags{}, {{"maps", names}});
}

FneOperator svd_soft_threshold(std::size_t rows, std::size_t cols, double rho) {
  require_positive(rho, "singular value threshold");
  return FneOperator(
      "svd_soft_threshold", Shape::grid(rows, cols),
      [rows, cols, rho](std::span<const double> in, std::span<double> out) {
        Eigen::Map<const RowMatrix> y(in.data(), rows, cols);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd s = svd.singularValues();
        for (Eigen::Index k = 0; k < s.size(); ++k) s[k] = soft_threshold(s[k], rho);
        Eigen::Map<RowMatrix>(out.data(), rows, cols) =
            svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
      },
      FneFlags{}, {{"rho", rho}, {"rows", rows}, {"cols", cols}});
}

FneOperator forward_backward_fne(const FneOperator& resolvent, VectorMap cocoercive,
                                 double beta, double gamma) {
  require_positive(beta, "cocoercivity constant");
  if (!(gamma > 0.0 && gamma < 2.0 * beta))
    throw InvalidParameter("forward-backward step must lie in (0, 2 beta)");
  const double scale = 1.0 - gamma / (4.0 * beta);
  auto j = resolvent.map();
  return FneOperator(
      "forward_backward", resolvent.domain(),
      [j, b = std::move(cocoercive), gamma, scale](std::span<const double> in,
                                                   std::span<double> out) {
        std::vector<double> fwd(in.size());
        b(in, fwd);
        for (std::size_t i = 0; i < in.size(); ++i) fwd[i] = in[i] - gamma * fwd[i];
        j(fwd, out);
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = scale * (in[i] - out[i]);
      },
      FneFlags{}, {{"beta", beta}, {"gamma", gamma}, {"resolvent", resolvent.kind()}});
}

SpacePoint WeaklyConvexProx::apply(const SpacePoint& y) const {
  require_same_shape(domain, y.shape(), name.c_str());
  std::vector<double> out(y.size());
  map(y.values(), out);
  return SpacePoint::unchecked(domain, std::move(out));
}

WeaklyConvexProx log_threshold_prox(const Shape& shape, double rho, double gamma) {
  log_threshold(0.0, rho, gamma);  // parameter validation
  return WeaklyConvexProx{
      "log_threshold", shape,
      elementwise([rho, gamma](double v) { return log_threshold(v, rho, gamma); }),
      1.0 / (rho * rho), gamma};
}

namespace {

void check_beta(const WeaklyConvexProx& q, double beta) {
  if (!(q.gamma * q.mu < 1.0))
    throw InvalidParameter("weakly convex prox requires gamma mu < 1");
  if (!(beta > 0.0) || beta > q.cocoercivity() * (1.0 + 1e-12))
    throw InvalidParameter("scaling factor must lie in (0, 1 - gamma mu] = (0, " +
                           std::to_string(q.cocoercivity()) + "]");
}

} // namespace

FneOperator scale_to_fne(const WeaklyConvexProx& q, double beta) {
  check_beta(q, beta);
  return FneOperator(
      "scaled_" + q.name, q.domain,
      [m = q.map, beta](std::span<const double> in, std::span<double> out) {
        m(in, out);
        for (auto& v : out) v *= beta;
      },
      FneFlags{}, {{"beta", beta}, {"gamma", q.gamma}, {"mu", q.mu}});
}

FneOperator scaled_complement(const WeaklyConvexProx& q, double beta) {
  check_beta(q, beta);
  return FneOperator(
      "complement_scaled_" + q.name, q.domain,
      [m = q.map, beta](std::span<const double> in, std::span<double> out) {
        m(in, out);
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] - beta * out[i];
      },
      FneFlags{}, {{"beta", beta}, {"gamma", q.gamma}, {"mu", q.mu}});
}

} // namespace sigcon
