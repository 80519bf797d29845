#pragma once

#include "sigcon/core/space_point.hpp"
#include "sigcon/solver/solver.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace sigcon::io {

/// 8-bit greyscale image as read from a PGM file.
struct GreyImage {
  std::size_t rows = 0, cols = 0;
  std::vector<double> pixels;
};

/// Writes a binary (P5) PGM with maxval 255. Values are rounded and clamped
/// to [0, 255] in the file only.
void write_pgm(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
               std::span<const double> values);
/// Writes the single grid block of `image`.
void write_pgm(const std::filesystem::path& path, const SpacePoint& image);
/// Writes block `k` of a point whose block k is a grid.
void write_pgm_block(const std::filesystem::path& path, const SpacePoint& point,
                     std::size_t k);

/// Reads P5 (maxval <= 255) or plain P2 files. Throws IoError/FormatError.
GreyImage read_pgm(const std::filesystem::path& path);

/// Shortest-round-trip-safe decimal: 17 significant digits.
std::string format_double(double v);

/// Writes "index,value" rows.
void write_vector_csv(const std::filesystem::path& path, std::span<const double> values);
std::vector<double> read_vector_csv(const std::filesystem::path& path);

/// Row-major numeric matrix CSV without header.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Trace columns: n, seconds, residual, step_norm, active_set_id. When
/// `wall_clock` is false the seconds column is written as "nan" so that
/// reruns produce identical files.
void write_trace_csv(const std::filesystem::path& path, const SolverTrace& trace,
                     bool wall_clock);

struct TraceRow {
  std::size_t n = 0;
  double seconds = 0.0;
  double residual = 0.0;
  double step_norm = 0.0;
  std::size_t active_set_id = 0;
};
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

/// One row per snapshot: n, seconds, then the coordinates of x_n.
void write_iterates_csv(const std::filesystem::path& path, const SolverTrace& trace,
                        bool wall_clock);
struct Iterate {
  std::size_t n = 0;
  double seconds = 0.0;
  std::vector<double> x;
};
std::vector<Iterate> read_iterates_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

} // namespace sigcon::io
