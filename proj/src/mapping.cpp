#include "imrsim/mapping.hpp"

#include <fmt/format.h>

#include "imrsim/errors.hpp"

namespace imrsim {

std::string_view to_string(AllocationStrategy strategy) {
  return strategy == AllocationStrategy::TwoStage ? "two-stage" : "three-stage";
}

std::optional<AllocationStrategy> parse_strategy(std::string_view text) {
  if (text == "two-stage" || text == "two" || text == "2") return AllocationStrategy::TwoStage;
  if (text == "three-stage" || text == "three" || text == "3") return AllocationStrategy::ThreeStage;
  return std::nullopt;
}

std::vector<std::uint32_t> allocation_order(AllocationStrategy strategy,
                                            const DiskGeometry& geometry) {
  std::vector<std::uint32_t> order;
  order.reserve(geometry.zone_capacity());
  auto append_track = [&](std::uint32_t track) {
    const std::uint32_t start = geometry.track_start(track);
    for (std::uint32_t b = 0; b < geometry.track_size(track); ++b) order.push_back(start + b);
  };
  for (std::uint32_t t = 0; t < geometry.tracks_per_zone; t += 2) append_track(t);
  if (strategy == AllocationStrategy::TwoStage) {
    for (std::uint32_t t = 1; t < geometry.tracks_per_zone; t += 2) append_track(t);
  } else {
    for (std::uint32_t t = 1; t < geometry.tracks_per_zone; t += 4) append_track(t);
    for (std::uint32_t t = 3; t < geometry.tracks_per_zone; t += 4) append_track(t);
  }
  return order;
}

MappingTable::MappingTable(const DiskGeometry& geometry, AllocationStrategy strategy)
    : geometry_(geometry),
      strategy_(strategy),
      order_(allocation_order(strategy, geometry)),
      zones_(geometry.zone_count) {}

void MappingTable::set_strategy(AllocationStrategy strategy) {
  if (strategy == strategy_) return;
  strategy_ = strategy;
  order_ = allocation_order(strategy, geometry_);
  // Positions in the new order are unrelated to the old cursor; allocate()
  // skips anything already bound.
  for (auto& zone : zones_) zone.cursor = 0;
}

void MappingTable::check_zone(std::uint32_t zone_id) const {
  if (zone_id >= zones_.size()) {
    fail(Errc::AddressIllegal, fmt::format("zone {} beyond zone count {}", zone_id, zones_.size()));
  }
}

void MappingTable::check_offset(std::uint32_t offset, const char* what) const {
  if (offset >= geometry_.zone_capacity()) {
    fail(Errc::AddressIllegal, fmt::format("{} {} beyond zone capacity {}", what, offset,
                                           geometry_.zone_capacity()));
  }
}

MappingTable::Zone& MappingTable::materialize(std::uint32_t zone_id) {
  Zone& zone = zones_[zone_id];
  if (zone.forward.empty()) {
    zone.forward.assign(geometry_.zone_capacity(), kUnmapped);
    zone.reverse.assign(geometry_.zone_capacity(), kUnmapped);
  }
  return zone;
}

std::optional<std::uint32_t> MappingTable::lookup(std::uint32_t zone_id, std::uint32_t bo) const {
  check_zone(zone_id);
  check_offset(bo, "block offset");
  const Zone& zone = zones_[zone_id];
  if (zone.forward.empty() || zone.forward[bo] == kUnmapped) return std::nullopt;
  return zone.forward[bo];
}

std::optional<std::uint32_t> MappingTable::reverse_lookup(std::uint32_t zone_id,
                                                          std::uint32_t nbo) const {
  check_zone(zone_id);
  check_offset(nbo, "physical offset");
  const Zone& zone = zones_[zone_id];
  if (zone.reverse.empty() || zone.reverse[nbo] == kUnmapped) return std::nullopt;
  return zone.reverse[nbo];
}

bool MappingTable::is_valid(std::uint32_t zone_id, std::uint32_t nbo) const {
  return reverse_lookup(zone_id, nbo).has_value();
}

std::uint32_t MappingTable::allocate(std::uint32_t zone_id) {
  check_zone(zone_id);
  Zone& zone = zones_[zone_id];
  const auto capacity = static_cast<std::uint32_t>(order_.size());
  while (zone.cursor < capacity) {
    const std::uint32_t nbo = order_[zone.cursor++];
    if (zone.reverse.empty() || zone.reverse[nbo] == kUnmapped) return nbo;
  }
  fail(Errc::ZoneFull, fmt::format("zone {} has no free blocks", zone_id));
}

void MappingTable::bind(std::uint32_t zone_id, std::uint32_t bo, std::uint32_t nbo) {
  check_zone(zone_id);
  check_offset(bo, "block offset");
  check_offset(nbo, "physical offset");
  Zone& zone = materialize(zone_id);
  if (zone.forward[bo] != kUnmapped) {
    fail(Errc::Logic, fmt::format("zone {} block offset {} already bound", zone_id, bo));
  }
  if (zone.reverse[nbo] != kUnmapped) {
    fail(Errc::Logic, fmt::format("zone {} physical offset {} already bound", zone_id, nbo));
  }
  zone.forward[bo] = nbo;
  zone.reverse[nbo] = bo;
  ++zone.mapped;
  ++mapped_total_;
}

ZoneUtilization MappingTable::utilization(std::uint32_t zone_id) const {
  check_zone(zone_id);
  ZoneUtilization u;
  u.mapped_blocks = zones_[zone_id].mapped;
  u.capacity = geometry_.zone_capacity();
  u.fraction = static_cast<double>(u.mapped_blocks) / static_cast<double>(u.capacity);
  return u;
}

ZoneUtilization MappingTable::utilization() const {
  ZoneUtilization u;
  u.mapped_blocks = mapped_total_;
  u.capacity = geometry_.capacity_blocks();
  u.fraction = static_cast<double>(u.mapped_blocks) / static_cast<double>(u.capacity);
  return u;
}

std::uint32_t MappingTable::cursor(std::uint32_t zone_id) const {
  check_zone(zone_id);
  return zones_[zone_id].cursor;
}

std::span<const std::uint32_t> MappingTable::forward(std::uint32_t zone_id) const {
  check_zone(zone_id);
  return zones_[zone_id].forward;
}

void MappingTable::load_zone(std::uint32_t zone_id, std::vector<std::uint32_t> forward,
                             std::uint32_t cursor) {
  if (zone_id >= zones_.size()) fail(Errc::RestoreFailed, fmt::format("zone {} out of range", zone_id));
  const std::uint32_t capacity = geometry_.zone_capacity();
  if (cursor > capacity) fail(Errc::RestoreFailed, fmt::format("zone {} cursor out of range", zone_id));
  Zone fresh;
  fresh.cursor = cursor;
  if (!forward.empty()) {
    if (forward.size() != capacity) {
      fail(Errc::RestoreFailed, fmt::format("zone {} map has {} entries, want {}", zone_id,
                                            forward.size(), capacity));
    }
    fresh.reverse.assign(capacity, kUnmapped);
    for (std::uint32_t bo = 0; bo < capacity; ++bo) {
      const std::uint32_t nbo = forward[bo];
      if (nbo == kUnmapped) continue;
      if (nbo >= capacity || fresh.reverse[nbo] != kUnmapped) {
        fail(Errc::RestoreFailed, fmt::format("zone {} map is not injective", zone_id));
      }
      fresh.reverse[nbo] = bo;
      ++fresh.mapped;
    }
    fresh.forward = std::move(forward);
  }
  mapped_total_ = mapped_total_ - zones_[zone_id].mapped + fresh.mapped;
  zones_[zone_id] = std::move(fresh);
}

}  // namespace imrsim
