#include "sigcon/cli/io.hpp"

#include "sigcon/core/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sigcon::io {
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

double parse_double(std::string_view s, const fs::path& path, std::size_t line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t'))
    s.remove_suffix(1);
  if (s == "nan") return std::nan("");
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw FormatError(path.string() + ":" + std::to_string(line) + ": bad number '" +
                      std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint8_t to_byte(double v) {
  if (!std::isfinite(v)) throw InvalidParameter("cannot export a non-finite pixel");
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

// Reads the next whitespace-separated header token, skipping comments.
std::string pgm_token(std::istream& in, const fs::path& path) {
  std::string tok;
  while (in) {
    int c = in.peek();
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  in >> tok;
  if (tok.empty()) throw FormatError(path.string() + ": truncated PGM header");
  return tok;
}

std::size_t pgm_number(std::istream& in, const fs::path& path) {
  const auto tok = pgm_token(in, path);
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw FormatError(path.string() + ": bad PGM header value '" + tok + "'");
  return v;
}

} // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_pgm(const fs::path& path, std::size_t rows, std::size_t cols,
               std::span<const double> values) {
  if (values.size() != rows * cols) throw ShapeMismatch("PGM payload size mismatch");
  std::vector<char> bytes(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) bytes[i] = static_cast<char>(to_byte(values[i]));
  auto out = open_out(path, std::ios::binary);
  out << "P5\n" << cols << ' ' << rows << "\n255\n";
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_pgm(const fs::path& path, const SpacePoint& image) {
  if (!image.shape().is_single_grid()) throw ShapeMismatch("PGM export needs a single grid");
  write_pgm_block(path, image, 0);
}

void write_pgm_block(const fs::path& path, const SpacePoint& point, std::size_t k) {
  const auto& b = point.shape().block(k);
  if (!b.grid) throw ShapeMismatch("PGM export needs a grid block");
  write_pgm(path, b.rows, b.cols, point.block(k));
}

GreyImage read_pgm(const fs::path& path) {
  auto in = open_in(path, std::ios::binary);
  const auto magic = pgm_token(in, path);
  if (magic != "P5" && magic != "P2")
    throw FormatError(path.string() + ": not a PGM file (magic '" + magic + "')");
  GreyImage img;
  img.cols = pgm_number(in, path);
  img.rows = pgm_number(in, path);
  const auto maxval = pgm_number(in, path);
  if (maxval == 0 || maxval > 255)
    throw FormatError(path.string() + ": unsupported maxval " + std::to_string(maxval));
  const std::size_t n = img.rows * img.cols;
  img.pixels.resize(n);
  if (magic == "P5") {
    in.get();
    std::vector<char> bytes(n);
    in.read(bytes.data(), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
      throw FormatError(path.string() + ": truncated PGM payload");
    for (std::size_t i = 0; i < n; ++i)
      img.pixels[i] = static_cast<unsigned char>(bytes[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) img.pixels[i] = static_cast<double>(pgm_number(in, path));
  }
  return img;
}

void write_vector_csv(const fs::path& path, std::span<const double> values) {
  auto out = open_out(path);
  out << "index,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << format_double(values[i]) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<double> read_vector_csv(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  std::vector<double> out;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (lineno == 1 && !cells.empty() && cells[0].find("index") != std::string_view::npos)
      continue;
    out.push_back(parse_double(cells.back(), path, lineno));
  }
  return out;
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    for (auto cell : split(line)) row.push_back(parse_double(cell, path, lineno));
    if (!rows.empty() && row.size() != rows.front().size())
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(path.string() + ": empty matrix");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

void write_trace_csv(const fs::path& path, const SolverTrace& trace, bool wall_clock) {
  auto out = open_out(path);
  out << "n,seconds,residual,step_norm,active_set_id\n";
  for (const auto& r : trace.records)
    out << r.n << ',' << (wall_clock ? format_double(r.seconds) : "nan") << ','
        << format_double(r.residual) << ',' << format_double(r.step_norm) << ','
        << r.active_set_id << '\n';
}

std::vector<TraceRow> read_trace_csv(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  std::vector<TraceRow> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    auto c = split(line);
    if (c.size() != 5)
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected 5 columns");
    rows.push_back({static_cast<std::size_t>(parse_double(c[0], path, lineno)),
                    parse_double(c[1], path, lineno), parse_double(c[2], path, lineno),
                    parse_double(c[3], path, lineno),
                    static_cast<std::size_t>(parse_double(c[4], path, lineno))});
  }
  return rows;
}

void write_iterates_csv(const fs::path& path, const SolverTrace& trace, bool wall_clock) {
  if (trace.snapshots.size() != trace.records.size())
    throw MissingReference("trace holds no iterate snapshots");
  auto out = open_out(path);
  out << "n,seconds";
  if (!trace.snapshots.empty())
    for (std::size_t k = 0; k < trace.snapshots.front().size(); ++k) out << ",x" << k;
  out << '\n';
  for (std::size_t r = 0; r < trace.records.size(); ++r) {
    out << trace.records[r].n << ','
        << (wall_clock ? format_double(trace.records[r].seconds) : "nan");
    for (double v : trace.snapshots[r].values()) out << ',' << format_double(v);
    out << '\n';
  }
}

std::vector<Iterate> read_iterates_csv(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  std::vector<Iterate> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    auto c = split(line);
    if (c.size() < 3)
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": too few columns");
    Iterate it{static_cast<std::size_t>(parse_double(c[0], path, lineno)),
               parse_double(c[1], path, lineno), {}};
    for (std::size_t k = 2; k < c.size(); ++k) it.x.push_back(parse_double(c[k], path, lineno));
    rows.push_back(std::move(it));
  }
  return rows;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text(const fs::path& path) {
  auto in = open_in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace sigcon::io
