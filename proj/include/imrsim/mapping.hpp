#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "imrsim/geometry.hpp"

namespace imrsim {

/// Order in which a zone hands out physical blocks.
///   TwoStage:   every bottom track, then every top track.
///   ThreeStage: every bottom track, then top tracks 1, 5, 9, ...,
///               then the remaining top tracks 3, 7, 11, ...
/// Within a track blocks go in ascending order.
enum class AllocationStrategy : std::uint8_t { TwoStage, ThreeStage };

std::string_view to_string(AllocationStrategy strategy);
std::optional<AllocationStrategy> parse_strategy(std::string_view text);

/// Sequence of canonical in-zone offsets in allocation order. It is always a
/// permutation of [0, zone_capacity).
std::vector<std::uint32_t> allocation_order(AllocationStrategy strategy,
                                            const DiskGeometry& geometry);

struct ZoneUtilization {
  std::uint64_t mapped_blocks = 0;
  std::uint64_t capacity = 0;
  double fraction = 0.0;
};

/// Per-zone logical offset (bo) -> physical offset (nbo) map and its inverse.
///
/// Zones are materialized lazily on first bind so that large devices only pay
/// for the zones they touch. Not internally synchronized.
class MappingTable {
 public:
  static constexpr std::uint32_t kUnmapped = 0xFFFFFFFFu;

  MappingTable(const DiskGeometry& geometry, AllocationStrategy strategy);

  const DiskGeometry& geometry() const { return geometry_; }
  AllocationStrategy strategy() const { return strategy_; }

  /// Future allocations follow `strategy`; existing bindings are kept.
  void set_strategy(AllocationStrategy strategy);

  std::optional<std::uint32_t> lookup(std::uint32_t zone_id, std::uint32_t bo) const;
  std::optional<std::uint32_t> reverse_lookup(std::uint32_t zone_id, std::uint32_t nbo) const;
  bool is_valid(std::uint32_t zone_id, std::uint32_t nbo) const;

  /// Next unallocated physical offset in strategy order; advances the cursor.
  /// Throws SimError(ZoneFull) when nothing is left.
  std::uint32_t allocate(std::uint32_t zone_id);

  /// Throws SimError(Logic) when bo or nbo is already bound.
  void bind(std::uint32_t zone_id, std::uint32_t bo, std::uint32_t nbo);

  ZoneUtilization utilization(std::uint32_t zone_id) const;
  ZoneUtilization utilization() const;
  std::uint64_t mapped_blocks() const { return mapped_total_; }

  std::uint32_t cursor(std::uint32_t zone_id) const;
  /// Empty span for a zone that has never been touched.
  std::span<const std::uint32_t> forward(std::uint32_t zone_id) const;

  /// Replaces one zone's state. `forward` must be empty or zone_capacity long,
  /// and must be injective; throws SimError(RestoreFailed) otherwise.
  void load_zone(std::uint32_t zone_id, std::vector<std::uint32_t> forward, std::uint32_t cursor);

 private:
  struct Zone {
    std::vector<std::uint32_t> forward;
    std::vector<std::uint32_t> reverse;
    std::uint32_t cursor = 0;
    std::uint32_t mapped = 0;
  };

  void check_zone(std::uint32_t zone_id) const;
  void check_offset(std::uint32_t offset, const char* what) const;
  Zone& materialize(std::uint32_t zone_id);

  DiskGeometry geometry_;
  AllocationStrategy strategy_;
  std::vector<std::uint32_t> order_;
  std::vector<Zone> zones_;
  std::uint64_t mapped_total_ = 0;
};

}  // namespace imrsim
