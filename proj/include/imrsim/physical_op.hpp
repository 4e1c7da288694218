#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace imrsim {

enum class Direction : std::uint8_t { Read, Write };

std::string_view to_string(Direction direction);

/// One host request, in blocks.
struct IoRequest {
  Direction direction = Direction::Read;
  std::uint64_t lba = 0;
  std::uint32_t length = 1;
  std::optional<double> issue_time_us;

  friend bool operator==(const IoRequest&, const IoRequest&) = default;
};

enum class OpKind : std::uint8_t { MediaRead, MediaWrite };

enum class OpCause : std::uint8_t { Host, RmwBackupRead, RmwRestoreWrite };

std::string_view to_string(OpKind kind);
std::string_view to_string(OpCause cause);

/// A media access of `length` contiguous blocks on one track.
struct PhysicalOp {
  OpKind kind = OpKind::MediaRead;
  std::uint32_t zone_id = 0;
  std::uint32_t track_offset = 0;
  std::uint32_t block_offset = 0;
  std::uint32_t length = 1;
  OpCause cause = OpCause::Host;

  friend bool operator==(const PhysicalOp&, const PhysicalOp&) = default;
};

}  // namespace imrsim
