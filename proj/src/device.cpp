#include "imrsim/device.hpp"

#include <fmt/format.h>

#include "imrsim/errors.hpp"

namespace imrsim {

std::string_view to_string(Direction direction) {
  return direction == Direction::Read ? "read" : "write";
}

std::string_view to_string(OpKind kind) {
  return kind == OpKind::MediaRead ? "media-read" : "media-write";
}

std::string_view to_string(OpCause cause) {
  switch (cause) {
    case OpCause::Host: return "host";
    case OpCause::RmwBackupRead: return "rmw-backup-read";
    case OpCause::RmwRestoreWrite: return "rmw-restore-write";
  }
  return "unknown";
}

std::vector<PhysicalOp> coalesce(std::span<const PhysicalOp> ops) {
  std::vector<PhysicalOp> out;
  out.reserve(ops.size());
  for (const PhysicalOp& op : ops) {
    if (!out.empty()) {
      PhysicalOp& last = out.back();
      if (last.kind == op.kind && last.cause == op.cause && last.zone_id == op.zone_id &&
          last.track_offset == op.track_offset &&
          last.block_offset + last.length == op.block_offset) {
        last.length += op.length;
        continue;
      }
    }
    out.push_back(op);
  }
  return out;
}

Device::Device(const DeviceConfig& config)
    : config_(config),
      layout_(config.layout()),
      model_(config.model()),
      mapping_(layout_.geometry, config.strategy),
      store_(layout_.geometry.block_size_bytes, config.store_payloads) {
  config_.validate();
  if (config_.mode == RecordingMode::Cmr) cmr_written_.assign(layout_.geometry.capacity_blocks(), false);
}

bool Device::is_written(std::uint64_t lba) const {
  if (lba >= capacity_blocks()) fail(Errc::AddressIllegal, fmt::format("lba {} beyond capacity", lba));
  if (config_.mode == RecordingMode::Cmr) return cmr_written_[lba];
  const std::uint32_t zc = layout_.geometry.zone_capacity();
  return mapping_
      .lookup(static_cast<std::uint32_t>(lba / zc), static_cast<std::uint32_t>(lba % zc))
      .has_value();
}

std::uint64_t Device::written_blocks() const {
  return config_.mode == RecordingMode::Cmr ? cmr_written_count_ : mapping_.mapped_blocks();
}

ZoneUtilization Device::utilization() const {
  ZoneUtilization u;
  u.mapped_blocks = written_blocks();
  u.capacity = capacity_blocks();
  u.fraction = static_cast<double>(u.mapped_blocks) / static_cast<double>(u.capacity);
  return u;
}

void Device::reconfigure(const DeviceConfig& next) {
  if (next.capacity_bytes != config_.capacity_bytes || !(next.shape == config_.shape) ||
      next.mode != config_.mode || next.store_payloads != config_.store_payloads) {
    fail(Errc::Config, "geometry, capacity, mode and payload storage are fixed at creation");
  }
  next.validate();
  model_ = next.model();
  mapping_.set_strategy(next.strategy);
  config_ = next;
}

std::uint64_t Device::pba(std::uint32_t zone_id, std::uint32_t track, std::uint32_t block) const {
  return at_inverse({zone_id, track, block}, layout_.geometry);
}

void Device::validate_request(const IoRequest& request, std::span<const std::byte> payload) const {
  if (request.length == 0) fail(Errc::AddressIllegal, "request length must be at least one block");
  const std::uint64_t capacity = capacity_blocks();
  if (request.lba >= capacity || request.length > capacity - request.lba) {
    fail(Errc::AddressIllegal, fmt::format("request [{}, +{}) exceeds capacity {} blocks",
                                           request.lba, request.length, capacity));
  }
  if (!payload.empty()) {
    if (request.direction != Direction::Write) fail(Errc::Logic, "read requests carry no payload");
    const std::uint64_t want =
        static_cast<std::uint64_t>(request.length) * layout_.geometry.block_size_bytes;
    if (payload.size() != want) {
      fail(Errc::Logic, fmt::format("payload of {} bytes for {} blocks", payload.size(), request.length));
    }
  }
}

RequestResult Device::handle_request(const IoRequest& request, std::span<const std::byte> payload) {
  validate_request(request, payload);
  const std::uint32_t block_size = layout_.geometry.block_size_bytes;

  RequestResult result;
  std::vector<PhysicalOp> raw;
  if (config_.mode == RecordingMode::Cmr) {
    cmr_request(request, payload, raw, result.data);
  } else {
    raw.reserve(request.length);
    for (std::uint32_t i = 0; i < request.length; ++i) {
      const std::uint64_t lba = request.lba + i;
      if (request.direction == Direction::Write) {
        const auto block = payload.empty() ? std::span<const std::byte>{}
                                           : payload.subspan(std::size_t{i} * block_size, block_size);
        imr_write_block(lba, block, raw);
      } else {
        imr_read_block(lba, raw, result.data);
      }
    }
  }
  result.ops = coalesce(raw);
  result.service_ms = service(result.ops, head_, model_, layout_);
  stats_.record(result.ops, request.direction, result.service_ms);
  if (!store_.enabled()) result.data.clear();
  return result;
}

void Device::imr_write_block(std::uint64_t lba, std::span<const std::byte> payload,
                             std::vector<PhysicalOp>& ops) {
  const DiskGeometry& g = layout_.geometry;
  const std::uint32_t zc = g.zone_capacity();
  const auto zone = static_cast<std::uint32_t>(lba / zc);
  const auto bo = static_cast<std::uint32_t>(lba % zc);

  std::uint32_t nbo = 0;
  if (auto mapped = mapping_.lookup(zone, bo)) {
    nbo = *mapped;
  } else {
    nbo = mapping_.allocate(zone);
    mapping_.bind(zone, bo, nbo);
  }
  const TrackBlock pos = locate_in_zone(nbo, g);
  const BlockTriple target{zone, pos.track, pos.block};

  if (track_kind(pos.track, g) == TrackKind::Bottom) {
    const std::uint32_t j = adjacent_top_block(pos.block, g);
    NeighborSet valid;
    for (std::uint32_t top : top_neighbors(pos.track, g)) {
      if (mapping_.is_valid(zone, zone_offset_of({top, j}, g))) valid.push(top);
    }
    if (!valid.empty()) {
      switch (update_policy()) {
        case UpdatePolicy::ReadModifyWrite:
          append_rmw(target, valid, j, payload, ops);
          return;
      }
    }
  }
  plain_write(target, payload, ops);
}

void Device::plain_write(const BlockTriple& target, std::span<const std::byte> payload,
                         std::vector<PhysicalOp>& ops) {
  const DiskGeometry& g = layout_.geometry;
  ops.push_back({OpKind::MediaWrite, target.zone_id, target.track_offset, target.block_offset, 1,
                 OpCause::Host});
  store_.write(pba(target.zone_id, target.track_offset, target.block_offset), payload);
  if (track_kind(target.track_offset, g) == TrackKind::Bottom) {
    const std::uint32_t j = adjacent_top_block(target.block_offset, g);
    for (std::uint32_t top : top_neighbors(target.track_offset, g)) {
      store_.damage(pba(target.zone_id, top, j));
    }
  }
}

void Device::append_rmw(const BlockTriple& target, const NeighborSet& valid_tops,
                        std::uint32_t top_block, std::span<const std::byte> payload,
                        std::vector<PhysicalOp>& ops) {
  std::array<BlockStore::Payload, 2> backup;
  for (std::size_t k = 0; k < valid_tops.size(); ++k) {
    ops.push_back({OpKind::MediaRead, target.zone_id, valid_tops[k], top_block, 1,
                   OpCause::RmwBackupRead});
    backup[k] = store_.read(pba(target.zone_id, valid_tops[k], top_block));
  }
  plain_write(target, payload, ops);
  for (std::size_t k = 0; k < valid_tops.size(); ++k) {
    ops.push_back({OpKind::MediaWrite, target.zone_id, valid_tops[k], top_block, 1,
                   OpCause::RmwRestoreWrite});
    store_.write(pba(target.zone_id, valid_tops[k], top_block), backup[k]);
  }
}

std::vector<PhysicalOp> Device::rmw_update(const BlockTriple& target,
                                           std::span<const std::byte> payload) {
  const DiskGeometry& g = layout_.geometry;
  (void)at_inverse(target, g);
  if (config_.mode != RecordingMode::Imr) fail(Errc::Logic, "RMW applies to IMR devices only");
  if (track_kind(target.track_offset, g) != TrackKind::Bottom) {
    fail(Errc::Logic, fmt::format("track {} is not a bottom track", target.track_offset));
  }
  if (!payload.empty() && payload.size() != g.block_size_bytes) {
    fail(Errc::Logic, "RMW payload must be exactly one block");
  }
  const std::uint32_t j = adjacent_top_block(target.block_offset, g);
  NeighborSet valid;
  for (std::uint32_t top : top_neighbors(target.track_offset, g)) {
    if (mapping_.is_valid(target.zone_id, zone_offset_of({top, j}, g))) valid.push(top);
  }
  if (valid.empty()) fail(Errc::Logic, "no valid adjacent top block; use the plain write path");
  std::vector<PhysicalOp> ops;
  append_rmw(target, valid, j, payload, ops);
  return ops;
}

void Device::imr_read_block(std::uint64_t lba, std::vector<PhysicalOp>& ops,
                            std::vector<std::byte>& data) {
  const DiskGeometry& g = layout_.geometry;
  const std::uint32_t zc = g.zone_capacity();
  const auto zone = static_cast<std::uint32_t>(lba / zc);
  const auto bo = static_cast<std::uint32_t>(lba % zc);
  const auto mapped = mapping_.lookup(zone, bo);
  // An unwritten block is read where an identity mapping would put it.
  const TrackBlock pos = locate_in_zone(mapped.value_or(bo), g);
  ops.push_back({OpKind::MediaRead, zone, pos.track, pos.block, 1, OpCause::Host});
  if (!store_.enabled()) return;
  if (mapped) {
    const auto block = store_.read(pba(zone, pos.track, pos.block));
    data.insert(data.end(), block.begin(), block.end());
  } else {
    data.resize(data.size() + g.block_size_bytes, std::byte{0});
  }
}

void Device::cmr_request(const IoRequest& request, std::span<const std::byte> payload,
                         std::vector<PhysicalOp>& ops, std::vector<std::byte>& data) {
  const DiskGeometry& g = layout_.geometry;
  const std::uint64_t per_track = g.blocks_per_bottom_track;
  const OpKind kind = request.direction == Direction::Write ? OpKind::MediaWrite : OpKind::MediaRead;
  for (std::uint32_t i = 0; i < request.length; ++i) {
    const std::uint64_t lba = request.lba + i;
    const std::uint64_t track = lba / per_track;
    ops.push_back({kind, static_cast<std::uint32_t>(track / g.tracks_per_zone),
                   static_cast<std::uint32_t>(track % g.tracks_per_zone),
                   static_cast<std::uint32_t>(lba % per_track), 1, OpCause::Host});
    if (request.direction == Direction::Write) {
      if (!cmr_written_[lba]) {
        cmr_written_[lba] = true;
        ++cmr_written_count_;
      }
      store_.write(lba, payload.empty() ? std::span<const std::byte>{}
                                        : payload.subspan(std::size_t{i} * g.block_size_bytes,
                                                          g.block_size_bytes));
    } else if (store_.enabled()) {
      const auto block = store_.read(lba);
      data.insert(data.end(), block.begin(), block.end());
    }
  }
}

}  // namespace imrsim
