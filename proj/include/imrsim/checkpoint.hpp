#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "imrsim/device.hpp"
#include "imrsim/stats.hpp"

namespace imrsim {

/// Checkpoint file layout (version 1), two text lines:
///
///   <body>\n
///   crc32 <8 lowercase hex digits> length <body byte count>\n
///
/// <body> is one compact JSON object:
///   format      "imrsim-checkpoint"
///   version     1
///   sequence    monotonic checkpoint number
///   config      device config (see to_json(DeviceConfig))
///   geometry    derived geometry echo, checked on restore
///   stats       SimStats counters
///   head        {track, angle, clock_ms}
///   zones       [{zone, cursor, forward}] for every touched zone; forward is
///               zone_capacity big-endian u32 values as hex, ffffffff = unmapped
///   cmr_written CMR only: written-block bitmap as hex, LSB first per byte
///   payloads    [{pba, data}] sorted by pba, data as hex (when stored)
inline constexpr int kCheckpointVersion = 1;

std::string encode_checkpoint(const Device& device, std::uint64_t sequence);

struct RestoredDevice {
  Device device;
  std::uint64_t sequence = 0;
};

/// Throws SimError(RestoreFailed) on any integrity, version or content error.
RestoredDevice decode_checkpoint(std::string_view text);

nlohmann::json stats_to_json(const SimStats& stats);
SimStats stats_from_json(const nlohmann::json& j);

/// A directory of numbered checkpoint files.
class CheckpointDir {
 public:
  explicit CheckpointDir(std::filesystem::path dir);

  const std::filesystem::path& path() const { return dir_; }

  /// Sequence numbers present on disk, ascending (validity not checked).
  std::vector<std::uint64_t> sequences() const;
  std::filesystem::path file_for(std::uint64_t sequence) const;

  /// Writes `device` as the next sequence number (atomic rename).
  std::uint64_t write(const Device& device);

  /// Highest sequence that passes integrity checks, or nullopt for an empty
  /// directory. Throws SimError(RestoreFailed) if files exist but none is valid.
  std::optional<RestoredDevice> load_latest() const;

  void remove(std::uint64_t sequence);
  /// Keeps the newest `keep` files.
  void prune(std::size_t keep);

 private:
  std::filesystem::path dir_;
};

}  // namespace imrsim
