#pragma once

#include "sigcon/core/errors.hpp"
#include "sigcon/solver/solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace sigcon {

/// A manifest problem tied to one field, given as a dotted path such as
/// "solver.gamma" or "prescriptions[1].fne.rho".
class FieldError : public ManifestError {
public:
  FieldError(std::string field, const std::string& message)
      : ManifestError("field '" + field + "': " + message), field_(std::move(field)),
        message_(message) {}
  const std::string& field() const { return field_; }
  const std::string& detail() const { return message_; }

private:
  std::string field_;
  std::string message_;
};

/// Read access to a JSON object that reports failures against its path.
class JsonView {
public:
  JsonView(const nlohmann::json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const nlohmann::json& json() const { return *j_; }
  const std::string& path() const { return path_; }
  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }
  JsonView child(const std::string& key) const;
  JsonView at(std::size_t index) const;
  std::size_t size() const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  /// Finite number.
  double real(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  std::size_t count(const std::string& key) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::size_t> counts(const std::string& key) const;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;
  [[noreturn]] void fail(const std::string& message) const;

private:
  const nlohmann::json* j_;
  std::string path_;
};

struct Manifest {
  std::filesystem::path source;
  std::string text;
  nlohmann::json root;

  std::string experiment() const;
  std::uint64_t seed() const;
  /// Directory the manifest's relative paths are resolved against.
  std::filesystem::path base_dir() const;
};

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"image_recovery", "signal_recovery",
                                              "sparse_image", "source_separation", "custom"};
  return kinds;
}

/// Parses and validates the top-level structure (experiment kind, seed,
/// solver block, finite SNR fields). Throws ManifestError with the line of
/// the offending token or field.
Manifest parse_manifest(const std::string& text, std::filesystem::path source = {});
Manifest load_manifest(const std::filesystem::path& path);

/// 1-based line of the field's key in the manifest text, or 0 if not found.
std::size_t line_of_field(const std::string& text, const std::string& field);

/// Rethrows `e` as a ManifestError carrying the source and line.
[[noreturn]] void raise_located(const Manifest& m, const FieldError& e);

/// Reads the "solver" block. Defaults come from `defaults`.
SolverConfig solver_config_from_json(const JsonView& v, const SolverConfig& defaults);
nlohmann::json solver_config_to_json(const SolverConfig& c);

} // namespace sigcon
