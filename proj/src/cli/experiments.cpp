#include "sigcon/cli/experiments.hpp"

#include "sigcon/cli/metrics.hpp"
#include "sigcon/cli/serialization.hpp"
#include "sigcon/core/random.hpp"
#include "sigcon/fne/catalog.hpp"
#include "sigcon/fne/proxification.hpp"
#include "sigcon/linops/fourier.hpp"
#include "sigcon/linops/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sigcon {

namespace {

using nlohmann::json;

JsonView section(const JsonView& root, const std::string& key) {
  static const json empty = json::object();
  return root.has(key) ? root.child(key) : JsonView(empty, root.field(key));
}

std::vector<double> add(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

std::vector<double> noise_draw(std::uint64_t seed, std::uint64_t stream, std::size_t n) {
  return CounterRng(seed, stream).normal_vector(n);
}

ActivationSchedule schedule_from(const JsonView& root, const json& fallback, std::size_t count) {
  const json spec = root.has("schedule") ? root.json().at("schedule") : fallback;
  try {
    return make_schedule(spec, count);
  } catch (const FieldError&) {
    throw;
  } catch (const Error& e) {
    throw FieldError("schedule", e.what());
  } catch (const json::exception& e) {
    throw FieldError("schedule", e.what());
  }
}

SolverConfig config_from(const JsonView& root, SolverConfig defaults) {
  return root.has("solver") ? solver_config_from_json(root.child("solver"), defaults) : defaults;
}

std::vector<double> uniform_weights(std::size_t n) { return std::vector<double>(n, 1.0 / n); }

// Phase of the DFT of a real image, made exactly odd under frequency
// negation so that it passes the real-signal check bit for bit.
std::vector<double> real_signal_phase(std::size_t rows, std::size_t cols,
                                      std::span<const double> image) {
  const auto y = fourier::dft2_real(rows, cols, image);
  std::vector<double> theta(y.size());
  for (std::size_t k = 0; k < rows; ++k)
    for (std::size_t l = 0; l < cols; ++l) {
      const auto i = k * cols + l;
      const auto j = ((rows - k) % rows) * cols + (cols - l) % cols;
      theta[i] = std::arg(0.5 * (y[i] + std::conj(y[j])));
    }
  return theta;
}

SpacePoint svd_hard(const SpacePoint& y, double rho) { return svd_hard_threshold_map(y, rho); }

// ---------------------------------------------------------------------------

Experiment image_recovery(const Manifest& m) {
  JsonView root(m.root, "");
  const auto dims = section(root, "dimensions");
  const auto noise = section(root, "noise");
  const auto par = section(root, "parameters");
  const std::size_t rows = dims.count("rows", 32), cols = dims.count("cols", 32);
  if (rows < 2 || cols < 2) dims.fail("image must be at least 2 x 2");
  const auto seed = m.seed();
  const auto shape = Shape::grid(rows, cols);

  const auto truth = ellipse_phantom(rows, cols, seed);
  const auto blur = circular_convolution_2d(
      rows, cols,
      make_gaussian_kernel(par.count("kernel_size", 15), par.real("kernel_sigma", 3.5)));
  const double clip = par.real("clip_level", 60.0);
  if (!(clip > 0.0)) par.fail("clip_level", "must be positive");

  const auto blurred = blur.apply(truth);
  auto w1 = noise_draw(seed, streams::noise_1, shape.size());
  scale_noise_to_snr(blurred.values(), w1, noise.real("blur_snr_db", 24.0));
  auto acquired = add(blurred.values(), w1);
  for (auto& v : acquired) v = std::clamp(v, 0.0, clip);
  SpacePoint p1(shape, acquired);

  double mean = 0.0;
  for (double v : truth.values()) mean += v;
  mean /= static_cast<double>(truth.size());
  const double rho2 = par.real("mean_estimate", std::round(mean));

  auto w3 = noise_draw(seed, streams::noise_3, shape.size());
  scale_noise_to_snr(truth.values(), w3, noise.real("phase_snr_db", 49.0));
  const auto theta = real_signal_phase(rows, cols, add(truth.values(), w3));

  const auto w = uniform_weights(3);
  std::vector<Prescription> arms;
  arms.push_back(make_prescription(blur, box_projector(shape, 0.0, clip), p1, w[0]));
  arms.push_back(make_prescription(identity_operator(shape), residual_of(mean_adjust(shape, rho2)),
                                   SpacePoint::zeros(shape), w[1]));
  arms.push_back(make_prescription(identity_operator(shape),
                                   phase_prescription(rows, cols, theta),
                                   SpacePoint::zeros(shape), w[2]));
  auto problem = assemble_problem(
      ConstraintSet::from_projector(box_projector(shape, 0.0, 255.0), true, "[0, 255]"),
      std::move(arms));

  SolverConfig defaults;
  defaults.gamma = 1.9;
  defaults.max_iters = 5000;
  auto schedule = schedule_from(root, {{"kind", "full"}}, problem.size());
  json info{{"mean_estimate", rho2},
            {"true_mean", mean},
            {"clip_level", clip},
            {"blur_snr_db", snr_db(blurred.values(), w1)},
            {"phase_snr_db", snr_db(truth.values(), w3)}};
  return {"image_recovery", truth, std::move(problem), std::move(schedule),
          config_from(root, defaults), {{"observation", p1}}, std::move(info)};
}

Experiment signal_recovery(const Manifest& m) {
  JsonView root(m.root, "");
  const auto dims = section(root, "dimensions");
  const auto noise = section(root, "noise");
  const auto par = section(root, "parameters");
  const std::size_t n = dims.count("n", 128), count = dims.count("m", 150);
  const std::size_t blocks = dims.count("blocks", 16);
  if (n < 2) dims.fail("n", "must be at least 2");
  if (count == 0) dims.fail("m", "must be positive");
  if (blocks == 0 || n % blocks != 0) dims.fail("blocks", "must divide n");
  const double rho = par.real("rho", 0.05);
  const double bound = par.real("difference_bound", 0.1);
  if (!(rho > 0.0)) par.fail("rho", "must be positive");
  if (!(bound > 0.0)) par.fail("difference_bound", "must be positive");
  const auto seed = m.seed();
  const auto shape = Shape::vector(n);

  const auto truth = smooth_signal(n, seed);

  // Piecewise-constant observation p1 = proj_D1(x + w1).
  auto w1 = noise_draw(seed, streams::noise_1, n);
  scale_noise_to_snr(truth.values(), w1, noise.real("w1_snr_db", -2.3));
  const auto pc = blockwise_constant_projector(shape, uniform_partition(n, n / blocks));
  const auto p1 = pc.apply(SpacePoint(shape, add(truth.values(), w1)));

  // Thresholded dictionary observations chi_j = R(<x, e_j>) + nu_j.
  CounterRng drng(seed, streams::dictionary);
  Eigen::MatrixXd atoms(count, n);
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t k = 0; k < n; ++k) atoms(j, k) = drng.normal();
  std::vector<double> clean(count);
  for (std::size_t j = 0; j < count; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += atoms(j, k) * truth[k];
    clean[j] = quartic_root_threshold(s, rho);
  }
  auto w3 = noise_draw(seed, streams::noise_3, count);
  scale_noise_to_observed_snr(clean, w3, noise.real("w3_snr_db", 17.8));
  const auto chi = add(clean, w3);

  const auto w = uniform_weights(count + 2);
  std::vector<Prescription> arms;
  arms.push_back(make_prescription(identity_operator(shape), pc, p1, w[0]));
  arms.push_back(make_prescription(finite_difference_1d(n),
                                   soft_thresholder(Shape::vector(n - 1), bound),
                                   SpacePoint::zeros(Shape::vector(n - 1)), w[1]));
  for (std::size_t j = 0; j < count; ++j) {
    auto prox = proxify_root(rho, chi[j]);
    arms.push_back(make_prescription(dictionary_rows(atoms.row(j)), std::move(prox.fne),
                                     std::move(prox.target), w[j + 2]));
  }
  auto problem = assemble_problem(ConstraintSet::whole_space(shape), std::move(arms));

  SolverConfig defaults;
  defaults.gamma = 1.9;
  defaults.max_iters = 200000;
  defaults.trace_every = 10;
  auto schedule = schedule_from(
      root, {{"kind", "cyclic_partition"}, {"block_count", 4}, {"always_active", {0, 1}}},
      problem.size());
  double max_diff = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k)
    max_diff = std::max(max_diff, std::abs(truth[k + 1] - truth[k]));
  json info{{"rho", rho},
            {"difference_bound", bound},
            {"true_max_difference", max_diff},
            {"w1_snr_db", snr_db(truth.values(), w1)},
            {"w3_snr_db", snr_db(chi, w3)},
            {"observation_relative_error", relative_error(p1.values(), truth.values())}};
  return {"signal_recovery", truth, std::move(problem), std::move(schedule),
          config_from(root, defaults),
          {{"observation", p1}, {"dictionary_data", SpacePoint::vector(chi)}},
          std::move(info)};
}

Experiment sparse_image(const Manifest& m) {
  JsonView root(m.root, "");
  const auto dims = section(root, "dimensions");
  const auto noise = section(root, "noise");
  const auto par = section(root, "parameters");
  const std::size_t rows = dims.count("rows", 32), cols = dims.count("cols", 32);
  if (rows < 2 || cols < 2) dims.fail("image must be at least 2 x 2");
  const auto seed = m.seed();
  const auto shape = Shape::grid(rows, cols);
  const std::size_t rank = par.count("rank", 11);
  if (rank == 0 || rank >= std::min(rows, cols)) par.fail("rank", "must lie in [1, min(rows, cols))");
  const double rho2 = par.real("sparsity_rho", 1.5);
  if (!(rho2 > 0.0)) par.fail("sparsity_rho", "must be positive");

  const auto truth = stroke_phantom(rows, cols, seed);
  const auto blur = circular_convolution_2d(rows, cols,
                                            make_uniform_kernel(par.count("kernel_size", 7)));
  const auto blurred = blur.apply(truth);
  auto w1 = noise_draw(seed, streams::noise_1, shape.size());
  scale_noise_to_snr(blurred.values(), w1, noise.real("blur_snr_db", 17.6));
  const SpacePoint y(shape, add(blurred.values(), w1));
  const double rho = par.real("svd_threshold", threshold_for_rank(y, rank));
  const auto q1 = svd_hard(y, rho);
  auto prox = proxify_svd(rho, q1);

  FneOperator sparsity = linf_ball_projector(shape, rho2);
  const bool log_variant = par.flag("log_threshold", false);
  double beta = 0.0;
  if (log_variant) {
    auto q = log_threshold_prox(shape, rho2, 0.05 / (rho2 * rho2));
    beta = par.real("log_beta", 0.95);
    sparsity = scaled_complement(q, beta);
  }

  const auto w = uniform_weights(2);
  std::vector<Prescription> arms;
  arms.push_back(make_prescription(blur, std::move(prox.fne), std::move(prox.target), w[0]));
  arms.push_back(make_prescription(identity_operator(shape), std::move(sparsity),
                                   SpacePoint::zeros(shape), w[1]));
  auto problem = assemble_problem(
      ConstraintSet::from_projector(box_projector(shape, 0.0, 255.0), true, "[0, 255]"),
      std::move(arms));

  SolverConfig defaults;
  defaults.gamma = 1.0;
  defaults.max_iters = 100000;
  defaults.trace_every = 10;
  auto schedule = schedule_from(
      root, {{"kind", "mod_skip"}, {"expensive", {0}}, {"period", 5}}, problem.size());
  json info{{"svd_threshold", rho},
            {"rank", rank},
            {"sparsity_rho", rho2},
            {"log_threshold", log_variant},
            {"blur_snr_db", snr_db(blurred.values(), w1)}};
  if (log_variant) info["log_beta"] = beta;
  return {"sparse_image", truth, std::move(problem), std::move(schedule),
          config_from(root, defaults), {{"observation", q1}}, std::move(info)};
}

Experiment source_separation(const Manifest& m) {
  JsonView root(m.root, "");
  const auto dims = section(root, "dimensions");
  const auto par = section(root, "parameters");
  const std::size_t rows = dims.count("rows", 48), cols = dims.count("cols", 48);
  if (rows < 2 || cols < 2) dims.fail("image must be at least 2 x 2");
  const auto seed = m.seed();
  const auto grid = Shape::grid(rows, cols);
  const auto pair = Shape::product({grid, grid});
  const std::size_t rank = par.count("rank", 6);
  if (rank == 0 || rank >= std::min(rows, cols)) par.fail("rank", "must lie in [1, min(rows, cols))");
  const double star_rho = par.real("star_rho", 10.0);
  const double galaxy_rho = par.real("galaxy_rho", 45.0);
  if (!(star_rho > 0.0)) par.fail("star_rho", "must be positive");
  if (!(galaxy_rho > 0.0)) par.fail("galaxy_rho", "must be positive");

  auto [stars, galaxy] = sky_phantom(rows, cols, par.count("star_count", 25), seed);
  std::vector<double> both = stars.to_vector();
  const auto g = galaxy.values();
  both.insert(both.end(), g.begin(), g.end());
  const SpacePoint truth(pair, both);

  const auto sum = pair_sum(grid);
  const auto mixed = sum.apply(truth);
  const double rho = par.real("svd_threshold", threshold_for_rank(mixed, rank));
  const auto q1 = svd_hard(mixed, rho);
  auto prox = proxify_svd(rho, q1);

  std::vector<double> lo(pair.size()), hi(pair.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    lo[k] = -star_rho;
    hi[k] = star_rho;
    lo[grid.size() + k] = -galaxy_rho;
    hi[grid.size() + k] = galaxy_rho;
  }

  const auto w = uniform_weights(2);
  std::vector<Prescription> arms;
  arms.push_back(make_prescription(sum, std::move(prox.fne), std::move(prox.target), w[0]));
  arms.push_back(make_prescription(block_stack({identity_operator(grid), dct_2d(rows, cols)}),
                                   box_projector(pair, lo, hi), SpacePoint::zeros(pair), w[1]));
  auto problem = assemble_problem(
      ConstraintSet::from_projector(box_projector(pair, 0.0, 255.0), true, "[0, 255]^2"),
      std::move(arms));

  SolverConfig defaults;
  defaults.gamma = 1.0;
  defaults.max_iters = 100000;
  defaults.trace_every = 10;
  auto schedule = schedule_from(
      root, {{"kind", "mod_skip"}, {"expensive", {0}}, {"period", 5}}, problem.size());
  json info{{"svd_threshold", rho}, {"rank", rank}, {"star_rho", star_rho},
            {"galaxy_rho", galaxy_rho}};
  return {"source_separation", truth, std::move(problem), std::move(schedule),
          config_from(root, defaults), {{"observation", q1}, {"superposition", mixed}},
          std::move(info)};
}

Experiment custom(const Manifest& m) {
  JsonView root(m.root, "");
  const auto base = m.base_dir();
  const auto space = serial::shape_from_json(root.child("space"));
  static const json whole{{"kind", "whole_space"}};
  auto constraint = serial::constraint_from_json(
      root.has("constraint") ? root.child("constraint") : JsonView(whole, "constraint"), space,
      base);
  const auto list = root.child("prescriptions");
  if (list.size() == 0) list.fail("needs at least one prescription");
  std::vector<Prescription> arms;
  static const json identity{{"kind", "identity"}};
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto v = list.at(i);
    auto linop = serial::linop_from_json(
        v.has("linop") ? v.child("linop") : JsonView(identity, v.field("linop")), space, base);
    const auto domain = linop.output_shape();
    const double weight = v.real("weight", 1.0 / static_cast<double>(list.size()));
    if (v.has("proxify")) {
      auto prox = serial::proxification_from_json(v.child("proxify"), domain, base);
      arms.push_back(make_prescription(std::move(linop), std::move(prox.fne),
                                       std::move(prox.target), weight));
    } else {
      auto fne = serial::fne_from_json(v.child("fne"), domain, base);
      auto target = serial::point_from_json(v, "target", domain, base);
      arms.push_back(make_prescription(std::move(linop), std::move(fne), std::move(target),
                                       weight));
    }
  }
  Problem problem = [&] {
    try {
      return assemble_problem(std::move(constraint), std::move(arms));
    } catch (const WeightSumError& e) {
      throw FieldError("prescriptions", e.what());
    }
  }();
  std::optional<SpacePoint> truth;
  if (root.has("ground_truth"))
    truth = serial::point_from_json(root, "ground_truth", space, base);
  SolverConfig config = config_from(root, SolverConfig{});
  if (root.has("x0")) config.x0 = serial::point_from_json(root, "x0", space, base);
  auto schedule = schedule_from(root, {{"kind", "full"}}, problem.size());
  return {"custom", truth, std::move(problem), std::move(schedule), config, {}, json::object()};
}

} // namespace

// ---------------------------------------------------------------------------

SpacePoint smooth_signal(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, streams::ground_truth);
  const double f = rng.uniform(1.0, 2.0), phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  struct Bump {
    double a, c, w;
  };
  std::vector<Bump> bumps;
  for (int k = 0; k < 3; ++k)
    bumps.push_back({rng.uniform(-0.5, 0.8), rng.uniform(0.15, 0.85), rng.uniform(0.05, 0.12)});
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    double v = 0.3 * std::sin(2.0 * std::numbers::pi * f * t + phase);
    for (const auto& b : bumps) v += b.a * std::exp(-0.5 * std::pow((t - b.c) / b.w, 2));
    x[i] = v;
  }
  return SpacePoint::vector(std::move(x));
}

SpacePoint ellipse_phantom(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  CounterRng rng(seed, streams::ground_truth);
  std::vector<double> img(rows * cols, 100.0);
  const double R = static_cast<double>(rows), C = static_cast<double>(cols);
  for (int e = 0; e < 5; ++e) {
    const double cr = rng.uniform(0.2, 0.8) * R, cc = rng.uniform(0.2, 0.8) * C;
    const double ar = rng.uniform(0.1, 0.3) * R, ac = rng.uniform(0.1, 0.3) * C;
    const double angle = rng.uniform(0.0, std::numbers::pi);
    const double level = rng.uniform(-60.0, 120.0);
    const double ca = std::cos(angle), sa = std::sin(angle);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        const double dr = static_cast<double>(r) - cr, dc = static_cast<double>(c) - cc;
        const double u = (ca * dr + sa * dc) / ar, v = (-sa * dr + ca * dc) / ac;
        if (u * u + v * v <= 1.0) img[r * cols + c] += level;
      }
  }
  for (auto& v : img) v = std::clamp(v, 0.0, 255.0);
  return SpacePoint::grid(rows, cols, std::move(img));
}

SpacePoint stroke_phantom(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  CounterRng rng(seed, streams::ground_truth);
  std::vector<double> img(rows * cols, 0.0);
  const std::size_t strokes = std::max<std::size_t>(4, rows * cols / 128);
  for (std::size_t s = 0; s < strokes; ++s) {
    const bool horizontal = rng.below(2) == 0;
    const std::size_t len = 3 + rng.below(6);
    const std::size_t r0 = rng.below(rows), c0 = rng.below(cols);
    const double level = rng.uniform(150.0, 255.0);
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t r = horizontal ? r0 : r0 + k, c = horizontal ? c0 + k : c0;
      if (r < rows && c < cols) img[r * cols + c] = level;
    }
  }
  return SpacePoint::grid(rows, cols, std::move(img));
}

std::pair<SpacePoint, SpacePoint> sky_phantom(std::size_t rows, std::size_t cols,
                                              std::size_t stars, std::uint64_t seed) {
  CounterRng rng(seed, streams::ground_truth);
  std::vector<double> s(rows * cols, 0.0), g(rows * cols, 0.0);
  for (std::size_t k = 0; k < stars; ++k)
    s[rng.below(rows) * cols + rng.below(cols)] = rng.uniform(120.0, 255.0);
  const double R = static_cast<double>(rows), C = static_cast<double>(cols);
  const double cr = rng.uniform(0.4, 0.6) * R, cc = rng.uniform(0.4, 0.6) * C;
  const double sr = rng.uniform(0.12, 0.2) * R, sc = rng.uniform(0.2, 0.3) * C;
  const double angle = rng.uniform(0.0, std::numbers::pi);
  const double ca = std::cos(angle), sa = std::sin(angle);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double dr = static_cast<double>(r) - cr, dc = static_cast<double>(c) - cc;
      const double u = (ca * dr + sa * dc) / sr, v = (-sa * dr + ca * dc) / sc;
      g[r * cols + c] = 160.0 * std::exp(-0.5 * (u * u + v * v));
    }
  return {SpacePoint::grid(rows, cols, std::move(s)), SpacePoint::grid(rows, cols, std::move(g))};
}

double threshold_for_rank(const SpacePoint& y, std::size_t r) {
  const auto s = singular_values(y);
  if (r == 0 || r >= s.size()) throw InvalidParameter("rank must lie in [1, min(rows, cols))");
  if (!(s[r - 1] > s[r]))
    throw InvalidParameter("singular values " + std::to_string(r) + " and " +
                           std::to_string(r + 1) + " coincide; no threshold keeps rank " +
                           std::to_string(r));
  return 0.5 * (s[r - 1] + s[r]);
}

json default_manifest(const std::string& kind, std::uint64_t seed) {
  json m{{"experiment", kind}, {"seed", seed}};
  json output{{"directory", kind}, {"wall_clock", false}, {"snapshots", false},
              {"reference", false}};
  if (kind == "image_recovery") {
    m["dimensions"] = {{"rows", 32}, {"cols", 32}};
    m["noise"] = {{"blur_snr_db", 24.0}, {"phase_snr_db", 49.0}};
    m["parameters"] = {{"kernel_size", 15}, {"kernel_sigma", 3.5}, {"clip_level", 60.0}};
    m["solver"] = {{"gamma", 1.9}, {"max_iters", 5000}, {"tol", 1e-6}, {"trace_every", 1}};
    m["schedule"] = {{"kind", "full"}};
  } else if (kind == "signal_recovery") {
    m["dimensions"] = {{"n", 128}, {"m", 150}, {"blocks", 16}};
    m["noise"] = {{"w1_snr_db", -2.3}, {"w3_snr_db", 17.8}, {"distribution", "gaussian"}};
    m["parameters"] = {{"rho", 0.05}, {"difference_bound", 0.1}};
    m["solver"] = {{"gamma", 1.9}, {"max_iters", 200000}, {"tol", 1e-6}, {"trace_every", 10}};
    m["schedule"] = {{"kind", "cyclic_partition"}, {"block_count", 4}, {"always_active", {0, 1}}};
  } else if (kind == "sparse_image") {
    m["dimensions"] = {{"rows", 32}, {"cols", 32}};
    m["noise"] = {{"blur_snr_db", 17.6}, {"distribution", "gaussian"}};
    m["parameters"] = {{"kernel_size", 7}, {"rank", 11}, {"sparsity_rho", 1.5},
                       {"log_threshold", false}, {"log_beta", 0.95}};
    m["solver"] = {{"gamma", 1.0}, {"max_iters", 100000}, {"tol", 1e-6}, {"trace_every", 10}};
    m["schedule"] = {{"kind", "mod_skip"}, {"expensive", {0}}, {"period", 5}};
  } else if (kind == "source_separation") {
    m["dimensions"] = {{"rows", 48}, {"cols", 48}};
    m["parameters"] = {{"rank", 6}, {"star_rho", 10.0}, {"galaxy_rho", 45.0}, {"star_count", 25}};
    m["solver"] = {{"gamma", 1.0}, {"max_iters", 100000}, {"tol", 1e-6}, {"trace_every", 10}};
    m["schedule"] = {{"kind", "mod_skip"}, {"expensive", {0}}, {"period", 5}};
  } else if (kind == "custom") {
    m["space"] = {{"vector", 2}};
    m["constraint"] = {{"kind", "box"}, {"lo", 0.0}, {"hi", 1.0}};
    m["prescriptions"] = json::array(
        {{{"linop", {{"kind", "identity"}}},
          {"fne", {{"kind", "residual"}, {"of", {{"kind", "singleton"}, {"point", {0.0, 0.0}}}}}},
          {"target", {-0.5, 2.0}}, {"weight", 1.0}}});
    m["solver"] = {{"gamma", 1.0}, {"max_iters", 1000}, {"tol", 1e-9}, {"trace_every", 1}};
  } else {
    throw InvalidParameter("unknown experiment kind '" + kind + "'");
  }
  m["output"] = output;
  return m;
}

Experiment build_experiment(const Manifest& m) {
  const auto kind = m.experiment();
  if (kind == "image_recovery") return image_recovery(m);
  if (kind == "signal_recovery") return signal_recovery(m);
  if (kind == "sparse_image") return sparse_image(m);
  if (kind == "source_separation") return source_separation(m);
  if (kind == "custom") return custom(m);
  throw FieldError("experiment", "unknown experiment kind '" + kind + "'");
}

} // namespace sigcon
