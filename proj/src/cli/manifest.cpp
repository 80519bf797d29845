#include "sigcon/cli/manifest.hpp"

#include "sigcon/cli/io.hpp"

#include <cmath>
#include <cstdint>

namespace sigcon {

namespace {

bool is_count(const nlohmann::json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

} // namespace

JsonView JsonView::child(const std::string& key) const {
  if (!has(key)) fail(key, "is required");
  return {j_->at(key), field(key)};
}

JsonView JsonView::at(std::size_t index) const {
  if (!j_->is_array() || index >= j_->size())
    fail("has no element " + std::to_string(index));
  return {(*j_)[index], path_ + "[" + std::to_string(index) + "]"};
}

std::size_t JsonView::size() const {
  if (!j_->is_array()) fail("must be an array");
  return j_->size();
}

double JsonView::number(const std::string& key) const {
  if (!has(key)) fail(key, "is required");
  const auto& v = j_->at(key);
  if (!v.is_number()) fail(key, "must be a number");
  return v.get<double>();
}

double JsonView::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

double JsonView::real(const std::string& key) const {
  const double v = number(key);
  if (!std::isfinite(v)) fail(key, "must be finite");
  return v;
}

double JsonView::real(const std::string& key, double fallback) const {
  return has(key) ? real(key) : fallback;
}

std::size_t JsonView::count(const std::string& key) const {
  if (!has(key)) fail(key, "is required");
  const auto& v = j_->at(key);
  if (!is_count(v)) fail(key, "must be a nonnegative integer");
  return v.get<std::size_t>();
}

std::size_t JsonView::count(const std::string& key, std::size_t fallback) const {
  return has(key) ? count(key) : fallback;
}

std::string JsonView::text(const std::string& key) const {
  if (!has(key)) fail(key, "is required");
  const auto& v = j_->at(key);
  if (!v.is_string()) fail(key, "must be a string");
  return v.get<std::string>();
}

std::string JsonView::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

bool JsonView::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& v = j_->at(key);
  if (!v.is_boolean()) fail(key, "must be true or false");
  return v.get<bool>();
}

std::vector<double> JsonView::reals(const std::string& key) const {
  if (!has(key)) fail(key, "is required");
  const auto& v = j_->at(key);
  if (!v.is_array()) fail(key, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number() || !std::isfinite(e.get<double>()))
      fail(key, "must hold finite numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::size_t> JsonView::counts(const std::string& key) const {
  if (!has(key)) fail(key, "is required");
  const auto& v = j_->at(key);
  if (!v.is_array()) fail(key, "must be an array of integers");
  std::vector<std::size_t> out;
  for (const auto& e : v) {
    if (!is_count(e)) fail(key, "must hold nonnegative integers");
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

void JsonView::fail(const std::string& key, const std::string& message) const {
  throw FieldError(field(key), message);
}

void JsonView::fail(const std::string& message) const {
  throw FieldError(path_.empty() ? "(root)" : path_, message);
}

std::string Manifest::experiment() const { return root.at("experiment").get<std::string>(); }

std::uint64_t Manifest::seed() const { return root.value("seed", std::uint64_t{0}); }

std::filesystem::path Manifest::base_dir() const {
  return source.has_parent_path() ? source.parent_path() : std::filesystem::path(".");
}

std::size_t line_of_field(const std::string& text, const std::string& field) {
  // Walk the dotted path, searching for each key after the previous match.
  std::size_t pos = 0;
  std::size_t start = 0;
  bool found = false;
  while (start <= field.size()) {
    auto dot = field.find('.', start);
    std::string key = field.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    std::size_t index = std::string::npos;
    if (auto br = key.find('['); br != std::string::npos) {
      index = std::stoul(key.substr(br + 1));
      key = key.substr(0, br);
    }
    auto hit = text.find("\"" + key + "\"", pos);
    if (hit == std::string::npos) break;
    pos = hit + key.size() + 2;
    found = true;
    // Skip to the index-th object of an array value.
    for (std::size_t k = 0; index != std::string::npos && k <= index; ++k) {
      auto brace = text.find('{', pos);
      if (brace == std::string::npos) break;
      pos = brace + 1;
      if (k < index) {
        int depth = 1;
        while (pos < text.size() && depth > 0) {
          if (text[pos] == '{') ++depth;
          if (text[pos] == '}') --depth;
          ++pos;
        }
      }
    }
    if (dot == std::string::npos) {
      pos = hit;
      break;
    }
    start = dot + 1;
  }
  if (!found) return 0;
  std::size_t line = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

void raise_located(const Manifest& m, const FieldError& e) {
  const auto line = line_of_field(m.text, e.field());
  std::string where = m.source.empty() ? "manifest" : m.source.string();
  if (line) where += ":" + std::to_string(line);
  throw ManifestError(where + ": field '" + e.field() + "': " + e.detail());
}

namespace {

void check_snr_fields(const nlohmann::json& j, const std::string& path) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      const auto p = path.empty() ? k : path + "." + k;
      if (k.find("snr") != std::string::npos) {
        if (!v.is_number() || !std::isfinite(v.get<double>()))
          throw FieldError(p, "SNR values must be finite numbers (dB)");
      }
      check_snr_fields(v, p);
    }
  }
}

} // namespace

SolverConfig solver_config_from_json(const JsonView& v, const SolverConfig& defaults) {
  SolverConfig c = defaults;
  c.gamma = v.real("gamma", c.gamma);
  if (!(c.gamma > 0.0 && c.gamma < 2.0))
    v.fail("gamma", "must lie in the open interval (0, 2), got " + io::format_double(c.gamma));
  c.max_iters = v.count("max_iters", c.max_iters);
  c.tol = v.real("tol", c.tol);
  if (c.tol < 0.0) v.fail("tol", "must be nonnegative");
  c.trace_every = v.count("trace_every", c.trace_every);
  if (c.trace_every == 0) v.fail("trace_every", "must be positive");
  c.theta = v.real("theta", c.theta);
  if (!(c.theta > 0.0)) v.fail("theta", "must be positive");
  const auto t = v.text("t_init", c.t_init == TInitPolicy::copy_x0 ? "copy_x0" : "one_step");
  if (t == "copy_x0") c.t_init = TInitPolicy::copy_x0;
  else if (t == "one_step") c.t_init = TInitPolicy::one_step;
  else v.fail("t_init", "must be \"copy_x0\" or \"one_step\"");
  c.record_gaps = v.flag("record_gaps", c.record_gaps);
  const auto avg = v.text("averaging", c.averaging == Averaging::balanced ? "balanced" : "literal");
  if (avg == "balanced") c.averaging = Averaging::balanced;
  else if (avg == "literal") c.averaging = Averaging::literal;
  else v.fail("averaging", "must be \"balanced\" or \"literal\"");
  return c;
}

nlohmann::json solver_config_to_json(const SolverConfig& c) {
  return {{"gamma", c.gamma},
          {"max_iters", c.max_iters},
          {"tol", c.tol},
          {"trace_every", c.trace_every},
          {"theta", c.theta},
          {"t_init", c.t_init == TInitPolicy::copy_x0 ? "copy_x0" : "one_step"},
          {"averaging", c.averaging == Averaging::balanced ? "balanced" : "literal"}};
}

Manifest parse_manifest(const std::string& text, std::filesystem::path source) {
  Manifest m{std::move(source), text, {}};
  const std::string where = m.source.empty() ? "manifest" : m.source.string();
  try {
    m.root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ManifestError(where + ":" + std::to_string(line) + ":" + std::to_string(col) +
                        ": invalid JSON: " + e.what());
  }
  try {
    JsonView root(m.root, "");
    if (!m.root.is_object()) root.fail("manifest must be a JSON object");
    const auto kind = root.text("experiment");
    bool known = false;
    for (const auto& k : experiment_kinds()) known = known || k == kind;
    if (!known) root.fail("experiment", "unknown experiment kind '" + kind + "'");
    if (root.has("seed")) root.count("seed");
    if (root.has("solver")) solver_config_from_json(root.child("solver"), SolverConfig{});
    check_snr_fields(m.root, "");
  } catch (const FieldError& e) {
    raise_located(m, e);
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const IoError& e) {
    throw ManifestError(e.what());
  }
  return parse_manifest(text, path);
}

} // namespace sigcon
