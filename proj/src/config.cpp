#include "imrsim/config.hpp"

#include <cctype>
#include <charconv>

#include <fmt/format.h>

#include "imrsim/errors.hpp"

namespace imrsim {

std::string_view to_string(RecordingMode mode) { return mode == RecordingMode::Imr ? "imr" : "cmr"; }

std::optional<RecordingMode> parse_mode(std::string_view text) {
  if (text == "imr" || text == "IMR") return RecordingMode::Imr;
  if (text == "cmr" || text == "CMR") return RecordingMode::Cmr;
  return std::nullopt;
}

void DeviceConfig::validate() const {
  (void)geometry();
  (void)model();
  if (flush_interval == 0) fail(Errc::Config, "flush interval must be positive");
}

DiskGeometry DeviceConfig::geometry() const {
  return DiskGeometry::for_capacity(capacity_bytes, shape);
}

MechanicalModel DeviceConfig::model() const {
  MechanicalModel m;
  m.rpm = rpm;
  m.seek_settle_ms = seek_settle_ms;
  m.full_stroke_seek_ms = full_stroke_seek_ms;
  m.total_tracks = layout().total_tracks();
  m.validate();
  return m;
}

nlohmann::json to_json(const DeviceConfig& c) {
  return {
      {"capacity_bytes", c.capacity_bytes},
      {"block_size_bytes", c.shape.block_size_bytes},
      {"blocks_per_bottom_track", c.shape.blocks_per_bottom_track},
      {"blocks_per_top_track", c.shape.blocks_per_top_track},
      {"tracks_per_zone", c.shape.tracks_per_zone},
      {"mode", to_string(c.mode)},
      {"strategy", to_string(c.strategy)},
      {"rpm", c.rpm},
      {"seek_settle_ms", c.seek_settle_ms},
      {"full_stroke_seek_ms", c.full_stroke_seek_ms},
      {"flush_interval", c.flush_interval},
      {"store_payloads", c.store_payloads},
  };
}

DeviceConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(Errc::Config, "device config must be a JSON object");
  DeviceConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "capacity_bytes") c.capacity_bytes = value.get<std::uint64_t>();
      else if (key == "block_size_bytes") c.shape.block_size_bytes = value.get<std::uint32_t>();
      else if (key == "blocks_per_bottom_track") c.shape.blocks_per_bottom_track = value.get<std::uint32_t>();
      else if (key == "blocks_per_top_track") c.shape.blocks_per_top_track = value.get<std::uint32_t>();
      else if (key == "tracks_per_zone") c.shape.tracks_per_zone = value.get<std::uint32_t>();
      else if (key == "mode") {
        auto mode = parse_mode(value.get<std::string>());
        if (!mode) fail(Errc::Config, "mode must be imr or cmr");
        c.mode = *mode;
      } else if (key == "strategy") {
        auto strategy = parse_strategy(value.get<std::string>());
        if (!strategy) fail(Errc::Config, "strategy must be two-stage or three-stage");
        c.strategy = *strategy;
      } else if (key == "rpm") c.rpm = value.get<double>();
      else if (key == "seek_settle_ms") c.seek_settle_ms = value.get<double>();
      else if (key == "full_stroke_seek_ms") c.full_stroke_seek_ms = value.get<double>();
      else if (key == "flush_interval") c.flush_interval = value.get<std::uint64_t>();
      else if (key == "store_payloads") c.store_payloads = value.get<bool>();
      else fail(Errc::Config, fmt::format("unknown config key '{}'", key));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::Config, fmt::format("bad config value: {}", e.what()));
  }
  return c;
}

std::uint64_t parse_size(std::string_view text) {
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr == first) {
    fail(Errc::Usage, fmt::format("'{}' is not a size (try 4096, 32K, 1GiB)", text));
  }
  std::string suffix;
  for (const char* p = ptr; p != last; ++p) {
    suffix.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(*p))));
  }
  std::uint64_t shift = 0;
  if (suffix.empty() || suffix == "B") shift = 0;
  else if (suffix == "K" || suffix == "KB" || suffix == "KIB") shift = 10;
  else if (suffix == "M" || suffix == "MB" || suffix == "MIB") shift = 20;
  else if (suffix == "G" || suffix == "GB" || suffix == "GIB") shift = 30;
  else if (suffix == "T" || suffix == "TB" || suffix == "TIB") shift = 40;
  else fail(Errc::Usage, fmt::format("unknown size suffix in '{}'", text));
  if (shift > 0 && value > (~0ull >> shift)) fail(Errc::Usage, fmt::format("size '{}' overflows", text));
  return value << shift;
}

}  // namespace imrsim
