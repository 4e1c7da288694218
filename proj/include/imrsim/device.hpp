#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "imrsim/block_store.hpp"
#include "imrsim/config.hpp"
#include "imrsim/geometry.hpp"
#include "imrsim/latency.hpp"
#include "imrsim/mapping.hpp"
#include "imrsim/physical_op.hpp"
#include "imrsim/stats.hpp"

namespace imrsim {

/// How a bottom-track update protects the top-track data beside it.
/// Only read-modify-write is implemented; this is the dispatch point for
/// others (read-swap-write, move-on-modify).
enum class UpdatePolicy : std::uint8_t { ReadModifyWrite };

struct RequestResult {
  std::vector<PhysicalOp> ops;
  /// Payload of a read when the block store is enabled; empty otherwise.
  std::vector<std::byte> data;
  double service_ms = 0.0;
};

/// One simulated drive: mapping, payload store, head and counters.
///
/// Requests run strictly one at a time. Separate devices are independent and
/// may be driven from different threads.
class Device {
 public:
  explicit Device(const DeviceConfig& config);

  const DeviceConfig& config() const { return config_; }
  const DiskGeometry& geometry() const { return layout_.geometry; }
  const TrackLayout& layout() const { return layout_; }
  const MechanicalModel& model() const { return model_; }
  const MappingTable& mapping() const { return mapping_; }
  const BlockStore& store() const { return store_; }
  const SimStats& stats() const { return stats_; }
  const HeadState& head() const { return head_; }
  RecordingMode mode() const { return config_.mode; }
  UpdatePolicy update_policy() const { return UpdatePolicy::ReadModifyWrite; }

  std::uint64_t capacity_blocks() const { return layout_.geometry.capacity_blocks(); }
  bool is_written(std::uint64_t lba) const;
  std::uint64_t written_blocks() const;
  ZoneUtilization utilization() const;

  /// Applies the runtime-tunable part of `next` (strategy, mechanics, flush
  /// interval). Changing geometry, capacity, mode or payload storage is a
  /// Config error.
  void reconfigure(const DeviceConfig& next);

  /// Runs one host request through translation, placement and the latency
  /// model, and records it. `payload` is empty or length * block_size bytes.
  /// Invalid requests throw before any state changes.
  RequestResult handle_request(const IoRequest& request, std::span<const std::byte> payload = {});

  /// The RMW sequence for one bottom-track block: back up each valid
  /// adjacent top block, write the target, restore the backups. Mutates the
  /// block store but not the counters. Throws SimError(Logic) if the target
  /// is not on a bottom track or has no valid top neighbor.
  std::vector<PhysicalOp> rmw_update(const BlockTriple& target, std::span<const std::byte> payload);

  friend struct DeviceAccess;

 private:
  void validate_request(const IoRequest& request, std::span<const std::byte> payload) const;
  void imr_write_block(std::uint64_t lba, std::span<const std::byte> payload,
                       std::vector<PhysicalOp>& ops);
  void imr_read_block(std::uint64_t lba, std::vector<PhysicalOp>& ops, std::vector<std::byte>& data);
  void cmr_request(const IoRequest& request, std::span<const std::byte> payload,
                   std::vector<PhysicalOp>& ops, std::vector<std::byte>& data);
  void append_rmw(const BlockTriple& target, const NeighborSet& valid_tops,
                  std::uint32_t top_block, std::span<const std::byte> payload,
                  std::vector<PhysicalOp>& ops);
  void plain_write(const BlockTriple& target, std::span<const std::byte> payload,
                   std::vector<PhysicalOp>& ops);
  std::uint64_t pba(std::uint32_t zone_id, std::uint32_t track, std::uint32_t block) const;

  DeviceConfig config_;
  TrackLayout layout_;
  MechanicalModel model_;
  MappingTable mapping_;
  BlockStore store_;
  std::vector<bool> cmr_written_;
  std::uint64_t cmr_written_count_ = 0;
  SimStats stats_;
  HeadState head_;
};

/// Merges neighbouring ops of the same kind and cause that continue each
/// other on one track. Block counts are unchanged.
std::vector<PhysicalOp> coalesce(std::span<const PhysicalOp> ops);

}  // namespace imrsim
