#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace imrsim {

/// Track kinds of the interlaced layout. Bottom tracks are wider and denser;
/// each top track partially overlaps the two bottom tracks beside it.
enum class TrackKind : std::uint8_t { Bottom, Top };

/// How physical blocks are laid out on the platter.
///   Imr: interlaced bottom/top tracks with dynamic mapping.
///   Cmr: conventional baseline, uniform tracks, LBA == PBA.
enum class RecordingMode : std::uint8_t { Imr, Cmr };

/// (zone id, physical track within zone, block within track).
struct BlockTriple {
  std::uint32_t zone_id = 0;
  std::uint32_t track_offset = 0;
  std::uint32_t block_offset = 0;

  friend bool operator==(const BlockTriple&, const BlockTriple&) = default;
};

/// Position of a block inside one zone.
struct TrackBlock {
  std::uint32_t track = 0;
  std::uint32_t block = 0;

  friend bool operator==(const TrackBlock&, const TrackBlock&) = default;
};

/// Static shape of the simulated disk.
///
/// Zones hold `tracks_per_zone` tracks alternating bottom/top, starting with a
/// bottom track at even physical index. Inside a zone the canonical block
/// ordering is track 0's blocks, then track 1's, and so on.
struct DiskGeometry {
  std::uint32_t block_size_bytes = 4096;
  std::uint32_t blocks_per_bottom_track = 568;
  std::uint32_t blocks_per_top_track = 456;
  std::uint32_t tracks_per_zone = 20;
  std::uint32_t zone_count = 1;

  /// Throws SimError(Config) when an invariant does not hold.
  void validate() const;

  std::uint32_t blocks_per_track_pair() const {
    return blocks_per_bottom_track + blocks_per_top_track;
  }
  std::uint32_t zone_capacity() const {
    return (tracks_per_zone / 2) * blocks_per_track_pair();
  }
  std::uint64_t capacity_blocks() const {
    return static_cast<std::uint64_t>(zone_count) * zone_capacity();
  }
  std::uint64_t total_tracks() const {
    return static_cast<std::uint64_t>(zone_count) * tracks_per_zone;
  }

  std::uint32_t track_size(std::uint32_t track_offset) const;
  /// Canonical in-zone offset of block 0 of `track_offset`.
  std::uint32_t track_start(std::uint32_t track_offset) const;

  /// Shape with as many whole zones as fit in `capacity_bytes`; the trailing
  /// partial zone is dropped.
  static DiskGeometry for_capacity(std::uint64_t capacity_bytes, DiskGeometry shape);

  friend bool operator==(const DiskGeometry&, const DiskGeometry&) = default;
};

/// Up to two track offsets.
class NeighborSet {
 public:
  void push(std::uint32_t track) { tracks_[count_++] = track; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  const std::uint32_t* begin() const { return tracks_.data(); }
  const std::uint32_t* end() const { return tracks_.data() + count_; }
  std::uint32_t operator[](std::size_t i) const { return tracks_[i]; }

 private:
  std::array<std::uint32_t, 2> tracks_{};
  std::size_t count_ = 0;
};

TrackKind track_kind(std::uint32_t track_offset, const DiskGeometry& geometry);

/// Flat block address -> triple. Throws SimError(AddressIllegal) out of range.
BlockTriple at(std::uint64_t flat_address, const DiskGeometry& geometry);

/// Exact inverse of at(). Throws SimError(InvalidTriple) on a bad triple.
std::uint64_t at_inverse(const BlockTriple& triple, const DiskGeometry& geometry);

/// In-zone offset <-> (track, block). Offsets are not range checked.
TrackBlock locate_in_zone(std::uint32_t zone_offset, const DiskGeometry& geometry);
std::uint32_t zone_offset_of(TrackBlock position, const DiskGeometry& geometry);

/// Top tracks overlapping a bottom track, clipped to the zone.
/// Throws SimError(Logic) when called on a top track.
NeighborSet top_neighbors(std::uint32_t bottom_track_offset, const DiskGeometry& geometry);

/// The single block on each neighboring top track that a write to bottom
/// block `bottom_block_offset` disturbs: floor(i * top / bottom).
std::uint32_t adjacent_top_block(std::uint32_t bottom_block_offset,
                                 const DiskGeometry& geometry);

/// Maps blocks of either recording mode onto global head positions.
///
/// In CMR mode every track holds `blocks_per_bottom_track` blocks and LBA n
/// sits on global track n / blocks_per_bottom_track. CMR ops reuse the
/// zone/track fields by splitting the global track index into groups of
/// `tracks_per_zone`.
struct TrackLayout {
  DiskGeometry geometry;
  RecordingMode mode = RecordingMode::Imr;

  std::uint64_t total_tracks() const;
  std::uint32_t track_size(std::uint32_t track_offset) const;
  std::uint64_t global_track(std::uint32_t zone_id, std::uint32_t track_offset) const {
    return static_cast<std::uint64_t>(zone_id) * geometry.tracks_per_zone + track_offset;
  }
};

}  // namespace imrsim
