#pragma once

#include <json.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace sigcon {

enum class ScheduleKind { full, cyclic_partition, mod_skip, explicit_sets };

std::string to_string(ScheduleKind kind);

using IndexSet = std::vector<std::size_t>;

/// Periodic sequence of activation sets I_0, I_1, ... over indices
/// {0, ..., index_count - 1}, with the covering constant K: every K
/// consecutive sets cover all indices.
class ActivationSchedule {
public:
  ScheduleKind kind() const { return kind_; }
  std::size_t index_count() const { return index_count_; }
  std::size_t period() const { return sets_.size(); }
  std::size_t covering_constant() const { return k_; }

  /// I_n.
  const IndexSet& active(std::size_t n) const { return sets_[n % sets_.size()]; }
  /// Position of I_n inside the period.
  std::size_t set_id(std::size_t n) const { return n % sets_.size(); }
  const std::vector<IndexSet>& sets() const { return sets_; }

  nlohmann::json to_json() const;

private:
  ActivationSchedule(ScheduleKind kind, std::size_t n, std::vector<IndexSet> sets);
  friend ActivationSchedule full_schedule(std::size_t);
  friend ActivationSchedule cyclic_partition_schedule(std::size_t, std::vector<IndexSet>, IndexSet);
  friend ActivationSchedule mod_skip_schedule(std::size_t, IndexSet, std::size_t);
  friend ActivationSchedule explicit_schedule(std::size_t, std::vector<IndexSet>);

  ScheduleKind kind_;
  std::size_t index_count_;
  std::vector<IndexSet> sets_;
  std::size_t k_;
};

/// I_n = I for every n; K = 1.
ActivationSchedule full_schedule(std::size_t index_count);
/// I_n = always_active + blocks[n mod B]; K = B when every block is needed.
ActivationSchedule cyclic_partition_schedule(std::size_t index_count,
                                             std::vector<IndexSet> blocks,
                                             IndexSet always_active = {});
/// Indices in `expensive` are active only when n is a multiple of `period`;
/// all others every iteration. K = period.
ActivationSchedule mod_skip_schedule(std::size_t index_count, IndexSet expensive,
                                     std::size_t period);
/// Repeats `sets` periodically.
ActivationSchedule explicit_schedule(std::size_t index_count, std::vector<IndexSet> sets);

/// Smallest K such that every K consecutive sets of the periodic sequence
/// cover {0, ..., index_count - 1}. Throws EmptyBlock for an empty set,
/// CoverageError when some index is never activated and InvalidParameter for
/// out-of-range indices.
std::size_t validate_schedule(const std::vector<IndexSet>& sets, std::size_t index_count);
std::size_t validate_schedule(const ActivationSchedule& schedule, std::size_t index_count);

/// Builds a schedule from a manifest object:
///   {"kind": "full"}
///   {"kind": "cyclic_partition", "blocks": [[...], ...], "always_active": [...]}
///   {"kind": "cyclic_partition", "block_count": B, "always_active": [...]}
///   {"kind": "mod_skip", "expensive": [...], "period": P}
///   {"kind": "explicit", "sets": [[...], ...]}
/// With "block_count", the indices outside always_active are split into B
/// contiguous blocks of near-equal size.
ActivationSchedule make_schedule(const nlohmann::json& spec, std::size_t index_count);

} // namespace sigcon
