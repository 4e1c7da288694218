#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imrsim/device.hpp"

namespace imrsim {

/// Per-block display state. Only Free -> Allocated -> Rewritten moves occur;
/// Rewritten marks top blocks restored by an RMW sequence.
enum class BlockState : char { Free = 'F', Allocated = 'A', Rewritten = 'R' };

struct VizTrack {
  std::uint32_t track = 0;
  TrackKind kind = TrackKind::Bottom;
  /// One BlockState character per block.
  std::string blocks;
};

struct VizFrame {
  std::uint64_t frame_index = 0;
  std::uint64_t request_index = 0;
  std::uint32_t zone_id = 0;
  IoRequest trigger;
  std::vector<VizTrack> tracks;
};

/// Frame line format, version 1 (one JSON object per line):
///   {"v":1,"frame":n,"request":i,"zone":z,
///    "trigger":{"dir":"read"|"write","lba":...,"len":...},
///    "tracks":[{"track":t,"kind":"bottom"|"top","blocks":"FFAAR..."}]}
std::string to_json_line(const VizFrame& frame);

/// Follows the physical ops of one zone and snapshots it every
/// `sample_every` requests (request 0, N, 2N, ...).
class VizRecorder {
 public:
  /// Throws SimError(Usage) for an out-of-range zone or sample_every == 0.
  VizRecorder(const Device& device, std::uint32_t zone_id, std::uint64_t sample_every);

  std::optional<VizFrame> observe(const IoRequest& request, std::span<const PhysicalOp> ops);

  VizFrame snapshot() const;
  /// Static SVG of the current zone state.
  std::string render_svg() const;

 private:
  TrackLayout layout_;
  std::uint32_t zone_id_;
  std::uint64_t sample_every_;
  std::uint64_t requests_ = 0;
  std::uint64_t frames_ = 0;
  IoRequest last_;
  std::vector<std::string> tracks_;
};

}  // namespace imrsim
