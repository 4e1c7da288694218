#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "imrsim/geometry.hpp"
#include "imrsim/latency.hpp"
#include "imrsim/mapping.hpp"

namespace imrsim {

std::string_view to_string(RecordingMode mode);
std::optional<RecordingMode> parse_mode(std::string_view text);

/// Everything needed to build a device. Serialized into every checkpoint.
struct DeviceConfig {
  static constexpr std::uint64_t kDefaultCapacityBytes = 128ull << 30;

  std::uint64_t capacity_bytes = kDefaultCapacityBytes;
  /// Track shape; zone_count is derived from capacity_bytes.
  DiskGeometry shape;
  RecordingMode mode = RecordingMode::Imr;
  AllocationStrategy strategy = AllocationStrategy::TwoStage;
  double rpm = 5400.0;
  double seek_settle_ms = 1.0;
  double full_stroke_seek_ms = 20.0;
  std::uint64_t flush_interval = 10000;
  /// Keep block payloads in memory (and in checkpoints). Off by default since
  /// a full-size device cannot hold its own data in RAM.
  bool store_payloads = false;

  void validate() const;
  DiskGeometry geometry() const;
  TrackLayout layout() const { return {geometry(), mode}; }
  MechanicalModel model() const;

  friend bool operator==(const DeviceConfig&, const DeviceConfig&) = default;
};

nlohmann::json to_json(const DeviceConfig& config);
/// Missing keys keep their defaults; unknown keys are a Config error.
DeviceConfig config_from_json(const nlohmann::json& j);

/// "4096", "32K", "1GiB", "128G" -> bytes. Throws SimError(Usage).
std::uint64_t parse_size(std::string_view text);

}  // namespace imrsim
