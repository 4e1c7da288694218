#include "imrsim/geometry.hpp"

#include <fmt/format.h>

#include "imrsim/errors.hpp"

namespace imrsim {

void DiskGeometry::validate() const {
  if (block_size_bytes == 0) fail(Errc::Config, "block size must be positive");
  if (blocks_per_top_track == 0) fail(Errc::Config, "top track size must be positive");
  if (blocks_per_bottom_track <= blocks_per_top_track) {
    fail(Errc::Config,
         fmt::format("bottom track ({} blocks) must be denser than top track ({} blocks)",
                     blocks_per_bottom_track, blocks_per_top_track));
  }
  if (tracks_per_zone == 0 || tracks_per_zone % 2 != 0) {
    fail(Errc::Config,
         fmt::format("tracks per zone must be a positive even number, got {}", tracks_per_zone));
  }
  if (zone_count == 0) fail(Errc::Config, "device must hold at least one zone");
  // Zone offsets are stored as 32-bit values with one sentinel.
  if (static_cast<std::uint64_t>(tracks_per_zone / 2) * blocks_per_track_pair() >= 0xFFFFFFFFull) {
    fail(Errc::Config, "zone capacity too large");
  }
}

std::uint32_t DiskGeometry::track_size(std::uint32_t track_offset) const {
  return track_offset % 2 == 0 ? blocks_per_bottom_track : blocks_per_top_track;
}

std::uint32_t DiskGeometry::track_start(std::uint32_t track_offset) const {
  return (track_offset / 2) * blocks_per_track_pair() +
         (track_offset % 2 == 0 ? 0 : blocks_per_bottom_track);
}

DiskGeometry DiskGeometry::for_capacity(std::uint64_t capacity_bytes, DiskGeometry shape) {
  shape.zone_count = 1;
  shape.validate();
  const std::uint64_t zone_bytes =
      static_cast<std::uint64_t>(shape.zone_capacity()) * shape.block_size_bytes;
  const std::uint64_t zones = capacity_bytes / zone_bytes;
  if (zones == 0) {
    fail(Errc::Config, fmt::format("capacity {} bytes is smaller than one zone ({} bytes)",
                                   capacity_bytes, zone_bytes));
  }
  if (zones > 0xFFFFFFFFull) fail(Errc::Config, "capacity too large");
  shape.zone_count = static_cast<std::uint32_t>(zones);
  return shape;
}

TrackKind track_kind(std::uint32_t track_offset, const DiskGeometry& geometry) {
  if (track_offset >= geometry.tracks_per_zone) {
    fail(Errc::InvalidTriple, fmt::format("track offset {} outside zone of {} tracks",
                                          track_offset, geometry.tracks_per_zone));
  }
  return track_offset % 2 == 0 ? TrackKind::Bottom : TrackKind::Top;
}

TrackBlock locate_in_zone(std::uint32_t zone_offset, const DiskGeometry& geometry) {
  const std::uint32_t pair = zone_offset / geometry.blocks_per_track_pair();
  const std::uint32_t rem = zone_offset % geometry.blocks_per_track_pair();
  if (rem < geometry.blocks_per_bottom_track) return {2 * pair, rem};
  return {2 * pair + 1, rem - geometry.blocks_per_bottom_track};
}

std::uint32_t zone_offset_of(TrackBlock position, const DiskGeometry& geometry) {
  return geometry.track_start(position.track) + position.block;
}

BlockTriple at(std::uint64_t flat_address, const DiskGeometry& geometry) {
  if (flat_address >= geometry.capacity_blocks()) {
    fail(Errc::AddressIllegal, fmt::format("block address {} beyond capacity {}", flat_address,
                                           geometry.capacity_blocks()));
  }
  const std::uint64_t zone_capacity = geometry.zone_capacity();
  const auto in_zone = locate_in_zone(static_cast<std::uint32_t>(flat_address % zone_capacity),
                                      geometry);
  return {static_cast<std::uint32_t>(flat_address / zone_capacity), in_zone.track, in_zone.block};
}

std::uint64_t at_inverse(const BlockTriple& triple, const DiskGeometry& geometry) {
  if (triple.zone_id >= geometry.zone_count || triple.track_offset >= geometry.tracks_per_zone ||
      triple.block_offset >= geometry.track_size(triple.track_offset)) {
    fail(Errc::InvalidTriple, fmt::format("invalid triple ({}, {}, {})", triple.zone_id,
                                          triple.track_offset, triple.block_offset));
  }
  return static_cast<std::uint64_t>(triple.zone_id) * geometry.zone_capacity() +
         zone_offset_of({triple.track_offset, triple.block_offset}, geometry);
}

NeighborSet top_neighbors(std::uint32_t bottom_track_offset, const DiskGeometry& geometry) {
  if (track_kind(bottom_track_offset, geometry) != TrackKind::Bottom) {
    fail(Errc::Logic, fmt::format("track {} is a top track", bottom_track_offset));
  }
  NeighborSet neighbors;
  if (bottom_track_offset > 0) neighbors.push(bottom_track_offset - 1);
  if (bottom_track_offset + 1 < geometry.tracks_per_zone) neighbors.push(bottom_track_offset + 1);
  return neighbors;
}

std::uint32_t adjacent_top_block(std::uint32_t bottom_block_offset,
                                 const DiskGeometry& geometry) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(bottom_block_offset) *
                                    geometry.blocks_per_top_track /
                                    geometry.blocks_per_bottom_track);
}

std::uint64_t TrackLayout::total_tracks() const {
  if (mode == RecordingMode::Imr) return geometry.total_tracks();
  const std::uint64_t per_track = geometry.blocks_per_bottom_track;
  return (geometry.capacity_blocks() + per_track - 1) / per_track;
}

std::uint32_t TrackLayout::track_size(std::uint32_t track_offset) const {
  return mode == RecordingMode::Cmr ? geometry.blocks_per_bottom_track
                                    : geometry.track_size(track_offset);
}

}  // namespace imrsim
