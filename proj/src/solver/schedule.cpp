#include "sigcon/solver/schedule.hpp"

#include "sigcon/core/errors.hpp"

#include <algorithm>
#include <cstdint>

namespace sigcon {

std::string to_string(ScheduleKind kind) {
  switch (kind) {
  case ScheduleKind::full: return "full";
  case ScheduleKind::cyclic_partition: return "cyclic_partition";
  case ScheduleKind::mod_skip: return "mod_skip";
  case ScheduleKind::explicit_sets: return "explicit";
  }
  return "unknown";
}

std::size_t validate_schedule(const std::vector<IndexSet>& sets, std::size_t index_count) {
  if (index_count == 0) throw InvalidParameter("schedule over an empty index set");
  if (sets.empty()) throw EmptyBlock("schedule has no activation sets");
  const std::size_t period = sets.size();
  // last[i]: most recent activation time of i; first[i]: earliest one.
  std::vector<std::size_t> first(index_count, period), last(index_count, period);
  std::vector<std::size_t> gap(index_count, 0);
  for (std::size_t n = 0; n < period; ++n) {
    if (sets[n].empty()) throw EmptyBlock("activation set " + std::to_string(n) + " is empty");
    for (auto i : sets[n]) {
      if (i >= index_count)
        throw InvalidParameter("activation set " + std::to_string(n) + " has index " +
                               std::to_string(i) + " outside [0, " +
                               std::to_string(index_count) + ")");
      if (last[i] == n) continue;
      if (first[i] == period) first[i] = n;
      else gap[i] = std::max(gap[i], n - last[i]);
      last[i] = n;
    }
  }
  std::size_t k = 1;
  for (std::size_t i = 0; i < index_count; ++i) {
    if (first[i] == period)
      throw CoverageError("index " + std::to_string(i) + " is never activated");
    gap[i] = std::max(gap[i], first[i] + period - last[i]);
    k = std::max(k, gap[i]);
  }
  return k;
}

std::size_t validate_schedule(const ActivationSchedule& schedule, std::size_t index_count) {
  return validate_schedule(schedule.sets(), index_count);
}

ActivationSchedule::ActivationSchedule(ScheduleKind kind, std::size_t n,
                                       std::vector<IndexSet> sets)
    : kind_(kind), index_count_(n), sets_(std::move(sets)) {
  for (auto& s : sets_) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  k_ = validate_schedule(sets_, n);
}

nlohmann::json ActivationSchedule::to_json() const {
  return {{"kind", to_string(kind_)},
          {"index_count", index_count_},
          {"period", sets_.size()},
          {"K", k_}};
}

ActivationSchedule full_schedule(std::size_t index_count) {
  IndexSet all(index_count);
  for (std::size_t i = 0; i < index_count; ++i) all[i] = i;
  return ActivationSchedule(ScheduleKind::full, index_count, {all});
}

ActivationSchedule cyclic_partition_schedule(std::size_t index_count,
                                             std::vector<IndexSet> blocks,
                                             IndexSet always_active) {
  if (blocks.empty()) throw EmptyBlock("cyclic schedule needs at least one block");
  std::vector<IndexSet> sets;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw EmptyBlock("cyclic block " + std::to_string(b) + " is empty");
    IndexSet s = always_active;
    s.insert(s.end(), blocks[b].begin(), blocks[b].end());
    sets.push_back(std::move(s));
  }
  return ActivationSchedule(ScheduleKind::cyclic_partition, index_count, std::move(sets));
}

ActivationSchedule mod_skip_schedule(std::size_t index_count, IndexSet expensive,
                                     std::size_t period) {
  if (period == 0) throw InvalidParameter("mod_skip period must be positive");
  std::vector<bool> skip(index_count, false);
  for (auto i : expensive) {
    if (i >= index_count) throw InvalidParameter("mod_skip index out of range");
    skip[i] = true;
  }
  IndexSet all, cheap;
  for (std::size_t i = 0; i < index_count; ++i) {
    all.push_back(i);
    if (!skip[i]) cheap.push_back(i);
  }
  std::vector<IndexSet> sets{all};
  for (std::size_t n = 1; n < period; ++n) {
    if (cheap.empty()) throw EmptyBlock("mod_skip leaves iterations with no active index");
    sets.push_back(cheap);
  }
  return ActivationSchedule(ScheduleKind::mod_skip, index_count, std::move(sets));
}

ActivationSchedule explicit_schedule(std::size_t index_count, std::vector<IndexSet> sets) {
  return ActivationSchedule(ScheduleKind::explicit_sets, index_count, std::move(sets));
}

namespace {

bool is_index(const nlohmann::json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

IndexSet index_list(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) throw InvalidParameter(std::string("schedule field '") + field +
                                            "' must be an array of indices");
  IndexSet out;
  for (const auto& v : j) {
    if (!is_index(v))
      throw InvalidParameter(std::string("schedule field '") + field +
                             "' must hold nonnegative integers");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

std::vector<IndexSet> set_list(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) throw InvalidParameter(std::string("schedule field '") + field +
                                            "' must be an array of index arrays");
  std::vector<IndexSet> out;
  for (const auto& s : j) out.push_back(index_list(s, field));
  return out;
}

std::size_t count_field(const nlohmann::json& spec, const char* field, std::size_t fallback) {
  if (!spec.contains(field)) return fallback;
  if (!is_index(spec.at(field)))
    throw InvalidParameter(std::string("schedule field '") + field + "' must be a nonnegative integer");
  return spec.at(field).get<std::size_t>();
}

} // namespace

ActivationSchedule make_schedule(const nlohmann::json& spec, std::size_t index_count) {
  const std::string kind = spec.value("kind", std::string("full"));
  if (kind == "full") return full_schedule(index_count);
  if (kind == "cyclic_partition") {
    IndexSet always = spec.contains("always_active")
                          ? index_list(spec.at("always_active"), "always_active")
                          : IndexSet{};
    if (spec.contains("blocks"))
      return cyclic_partition_schedule(index_count, set_list(spec.at("blocks"), "blocks"),
                                       std::move(always));
    const auto count = count_field(spec, "block_count", 0);
    if (count == 0) throw InvalidParameter("cyclic_partition needs 'blocks' or 'block_count'");
    std::vector<bool> fixed(index_count, false);
    for (auto i : always)
      if (i < index_count) fixed[i] = true;
    IndexSet rest;
    for (std::size_t i = 0; i < index_count; ++i)
      if (!fixed[i]) rest.push_back(i);
    if (rest.size() < count) throw EmptyBlock("more cyclic blocks than free indices");
    std::vector<IndexSet> blocks(count);
    for (std::size_t b = 0; b < count; ++b) {
      const auto lo = b * rest.size() / count, hi = (b + 1) * rest.size() / count;
      blocks[b].assign(rest.begin() + lo, rest.begin() + hi);
    }
    return cyclic_partition_schedule(index_count, std::move(blocks), std::move(always));
  }
  if (kind == "mod_skip")
    return mod_skip_schedule(index_count, index_list(spec.at("expensive"), "expensive"),
                             count_field(spec, "period", 0));
  if (kind == "explicit")
    return explicit_schedule(index_count, set_list(spec.at("sets"), "sets"));
  throw InvalidParameter("unknown schedule kind '" + kind + "'");
}

} // namespace sigcon
