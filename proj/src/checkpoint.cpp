#include "imrsim/checkpoint.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "imrsim/errors.hpp"

namespace imrsim {

namespace {

constexpr std::string_view kFormatName = "imrsim-checkpoint";
constexpr std::string_view kFilePrefix = "checkpoint-";
constexpr std::string_view kFileSuffix = ".imrck";

constexpr char kHexDigits[] = "0123456789abcdef";

std::string bytes_to_hex(std::span<const std::byte> bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::byte b : bytes) {
    const auto v = std::to_integer<unsigned>(b);
    out.push_back(kHexDigits[v >> 4]);
    out.push_back(kHexDigits[v & 0xF]);
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::vector<std::byte> hex_to_bytes(std::string_view hex) {
  if (hex.size() % 2 != 0) fail(Errc::RestoreFailed, "odd-length hex field");
  std::vector<std::byte> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) fail(Errc::RestoreFailed, "bad hex digit");
    out[i] = static_cast<std::byte>((hi << 4) | lo);
  }
  return out;
}

std::string u32_to_hex(std::span<const std::uint32_t> values) {
  std::vector<std::byte> raw(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (int k = 0; k < 4; ++k) raw[4 * i + k] = static_cast<std::byte>(values[i] >> (24 - 8 * k));
  }
  return bytes_to_hex(raw);
}

std::vector<std::uint32_t> hex_to_u32(std::string_view hex) {
  const auto raw = hex_to_bytes(hex);
  if (raw.size() % 4 != 0) fail(Errc::RestoreFailed, "u32 array has a partial entry");
  std::vector<std::uint32_t> out(raw.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v = (v << 8) | std::to_integer<std::uint32_t>(raw[4 * i + k]);
    out[i] = v;
  }
  return out;
}

std::uint32_t crc_of(std::string_view body) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t offset = 0;
  while (offset < body.size()) {
    const std::size_t chunk = std::min<std::size_t>(body.size() - offset, 1u << 30);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(body.data() + offset), static_cast<uInt>(chunk));
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

nlohmann::json geometry_to_json(const DiskGeometry& g) {
  return {{"block_size_bytes", g.block_size_bytes},
          {"blocks_per_bottom_track", g.blocks_per_bottom_track},
          {"blocks_per_top_track", g.blocks_per_top_track},
          {"tracks_per_zone", g.tracks_per_zone},
          {"zone_count", g.zone_count}};
}

}  // namespace

/// Friend of Device; the only writer of restored internals.
struct DeviceAccess {
  static MappingTable& mapping(Device& d) { return d.mapping_; }
  static BlockStore& store(Device& d) { return d.store_; }
  static SimStats& stats(Device& d) { return d.stats_; }
  static HeadState& head(Device& d) { return d.head_; }
  static void set_cmr_written(Device& d, std::vector<bool> bits) {
    d.cmr_written_count_ = static_cast<std::uint64_t>(std::count(bits.begin(), bits.end(), true));
    d.cmr_written_ = std::move(bits);
  }
};

nlohmann::json stats_to_json(const SimStats& s) {
  return {{"read_requests", s.read_requests},
          {"write_requests", s.write_requests},
          {"host_reads", s.host_reads},
          {"host_writes", s.host_writes},
          {"media_reads", s.media_reads},
          {"media_writes", s.media_writes},
          {"extra_reads", s.extra_reads},
          {"extra_writes", s.extra_writes},
          {"rmw_events", s.rmw_events},
          {"total_read_latency_ms", s.total_read_latency_ms},
          {"total_write_latency_ms", s.total_write_latency_ms}};
}

SimStats stats_from_json(const nlohmann::json& j) {
  SimStats s;
  s.read_requests = j.at("read_requests").get<std::uint64_t>();
  s.write_requests = j.at("write_requests").get<std::uint64_t>();
  s.host_reads = j.at("host_reads").get<std::uint64_t>();
  s.host_writes = j.at("host_writes").get<std::uint64_t>();
  s.media_reads = j.at("media_reads").get<std::uint64_t>();
  s.media_writes = j.at("media_writes").get<std::uint64_t>();
  s.extra_reads = j.at("extra_reads").get<std::uint64_t>();
  s.extra_writes = j.at("extra_writes").get<std::uint64_t>();
  s.rmw_events = j.at("rmw_events").get<std::uint64_t>();
  s.total_read_latency_ms = j.at("total_read_latency_ms").get<double>();
  s.total_write_latency_ms = j.at("total_write_latency_ms").get<double>();
  return s;
}

std::string encode_checkpoint(const Device& device, std::uint64_t sequence) {
  nlohmann::json body;
  body["format"] = kFormatName;
  body["version"] = kCheckpointVersion;
  body["sequence"] = sequence;
  body["config"] = to_json(device.config());
  body["geometry"] = geometry_to_json(device.geometry());
  body["stats"] = stats_to_json(device.stats());
  body["head"] = {{"track", device.head().current_track},
                  {"angle", device.head().angle},
                  {"clock_ms", device.head().clock_ms}};

  auto zones = nlohmann::json::array();
  const MappingTable& mapping = device.mapping();
  for (std::uint32_t z = 0; z < device.geometry().zone_count; ++z) {
    const auto forward = mapping.forward(z);
    const std::uint32_t cursor = mapping.cursor(z);
    if (forward.empty() && cursor == 0) continue;
    zones.push_back({{"zone", z}, {"cursor", cursor}, {"forward", u32_to_hex(forward)}});
  }
  body["zones"] = std::move(zones);

  if (device.mode() == RecordingMode::Cmr) {
    const std::uint64_t n = device.capacity_blocks();
    std::vector<std::byte> bits((n + 7) / 8);
    for (std::uint64_t i = 0; i < n; ++i) {
      if (device.is_written(i)) bits[i / 8] |= static_cast<std::byte>(1u << (i % 8));
    }
    body["cmr_written"] = bytes_to_hex(bits);
  }

  std::vector<std::uint64_t> pbas;
  pbas.reserve(device.store().blocks().size());
  for (const auto& [pba, payload] : device.store().blocks()) pbas.push_back(pba);
  std::sort(pbas.begin(), pbas.end());
  auto payloads = nlohmann::json::array();
  for (std::uint64_t pba : pbas) {
    payloads.push_back({{"pba", pba}, {"data", bytes_to_hex(device.store().blocks().at(pba))}});
  }
  body["payloads"] = std::move(payloads);

  const std::string text = body.dump();
  return fmt::format("{}\ncrc32 {:08x} length {}\n", text, crc_of(text), text.size());
}

RestoredDevice decode_checkpoint(std::string_view text) {
  const auto newline = text.find('\n');
  if (newline == std::string_view::npos) fail(Errc::RestoreFailed, "checkpoint has no trailer");
  const std::string_view body = text.substr(0, newline);
  std::string_view trailer = text.substr(newline + 1);
  if (!trailer.empty() && trailer.back() == '\n') trailer.remove_suffix(1);

  unsigned crc = 0;
  std::size_t length = 0;
  {
    std::istringstream in{std::string(trailer)};
    std::string crc_tag, crc_hex, length_tag;
    in >> crc_tag >> crc_hex >> length_tag >> length;
    if (!in || crc_tag != "crc32" || length_tag != "length" || crc_hex.size() != 8) {
      fail(Errc::RestoreFailed, "malformed checkpoint trailer");
    }
    auto [ptr, ec] = std::from_chars(crc_hex.data(), crc_hex.data() + crc_hex.size(), crc, 16);
    if (ec != std::errc{} || ptr != crc_hex.data() + crc_hex.size()) {
      fail(Errc::RestoreFailed, "malformed checkpoint checksum");
    }
  }
  if (length != body.size()) fail(Errc::RestoreFailed, "checkpoint length mismatch (truncated?)");
  if (crc != crc_of(body)) fail(Errc::RestoreFailed, "checkpoint checksum mismatch");

  try {
    const auto j = nlohmann::json::parse(body);
    if (j.at("format").get<std::string>() != kFormatName) fail(Errc::RestoreFailed, "not a checkpoint");
    if (j.at("version").get<int>() != kCheckpointVersion) {
      fail(Errc::RestoreFailed, fmt::format("unsupported checkpoint version {}", j.at("version").dump()));
    }
    DeviceConfig config;
    try {
      config = config_from_json(j.at("config"));
      config.validate();
    } catch (const SimError& e) {
      fail(Errc::RestoreFailed, fmt::format("bad config in checkpoint: {}", e.what()));
    }
    RestoredDevice restored{Device(config), j.at("sequence").get<std::uint64_t>()};
    Device& device = restored.device;
    if (geometry_to_json(device.geometry()) != j.at("geometry")) {
      fail(Errc::RestoreFailed, "geometry echo does not match config");
    }
    DeviceAccess::stats(device) = stats_from_json(j.at("stats"));
    const auto& head = j.at("head");
    DeviceAccess::head(device) = {head.at("track").get<std::uint64_t>(), head.at("angle").get<double>(),
                                  head.at("clock_ms").get<double>()};

    for (const auto& zone : j.at("zones")) {
      DeviceAccess::mapping(device).load_zone(zone.at("zone").get<std::uint32_t>(),
                                              hex_to_u32(zone.at("forward").get<std::string>()),
                                              zone.at("cursor").get<std::uint32_t>());
    }
    if (device.mode() == RecordingMode::Cmr) {
      const auto raw = hex_to_bytes(j.at("cmr_written").get<std::string>());
      const std::uint64_t n = device.capacity_blocks();
      if (raw.size() != (n + 7) / 8) fail(Errc::RestoreFailed, "written bitmap size mismatch");
      std::vector<bool> bits(n);
      for (std::uint64_t i = 0; i < n; ++i) {
        bits[i] = (std::to_integer<unsigned>(raw[i / 8]) >> (i % 8)) & 1u;
      }
      DeviceAccess::set_cmr_written(device, std::move(bits));
    }
    std::unordered_map<std::uint64_t, BlockStore::Payload> blocks;
    for (const auto& entry : j.at("payloads")) {
      auto data = hex_to_bytes(entry.at("data").get<std::string>());
      if (data.size() != device.geometry().block_size_bytes) {
        fail(Errc::RestoreFailed, "payload size mismatch");
      }
      blocks.emplace(entry.at("pba").get<std::uint64_t>(), std::move(data));
    }
    if (!blocks.empty() && !device.store().enabled()) {
      fail(Errc::RestoreFailed, "payloads present but payload storage disabled");
    }
    DeviceAccess::store(device).load(std::move(blocks));
    return restored;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::RestoreFailed, fmt::format("checkpoint body: {}", e.what()));
  } catch (const SimError& e) {
    if (e.code() == Errc::RestoreFailed) throw;
    fail(Errc::RestoreFailed, e.what());
  }
}

CheckpointDir::CheckpointDir(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path CheckpointDir::file_for(std::uint64_t sequence) const {
  return dir_ / fmt::format("{}{:012}{}", kFilePrefix, sequence, kFileSuffix);
}

std::vector<std::uint64_t> CheckpointDir::sequences() const {
  std::vector<std::uint64_t> out;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir_, ec)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    const std::string name = entry.path().filename().string();
    if (name.size() <= kFilePrefix.size() + kFileSuffix.size() || !name.starts_with(kFilePrefix) ||
        !name.ends_with(kFileSuffix)) {
      continue;
    }
    const std::string_view digits(name.data() + kFilePrefix.size(),
                                  name.size() - kFilePrefix.size() - kFileSuffix.size());
    std::uint64_t seq = 0;
    auto [ptr, err] = std::from_chars(digits.data(), digits.data() + digits.size(), seq);
    if (err == std::errc{} && ptr == digits.data() + digits.size()) out.push_back(seq);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t CheckpointDir::write(const Device& device) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail(Errc::Io, fmt::format("cannot create {}: {}", dir_.string(), ec.message()));
  const auto existing = sequences();
  const std::uint64_t sequence = existing.empty() ? 1 : existing.back() + 1;
  const std::string text = encode_checkpoint(device, sequence);

  const auto final_path = file_for(sequence);
  auto tmp_path = final_path;
  tmp_path += ".tmp";
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) fail(Errc::Io, fmt::format("cannot write {}", tmp_path.string()));
  }
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) fail(Errc::Io, fmt::format("cannot commit {}: {}", final_path.string(), ec.message()));
  return sequence;
}

std::optional<RestoredDevice> CheckpointDir::load_latest() const {
  const auto seqs = sequences();
  if (seqs.empty()) return std::nullopt;
  std::string last_error;
  for (auto it = seqs.rbegin(); it != seqs.rend(); ++it) {
    std::ifstream in(file_for(*it), std::ios::binary);
    if (!in) continue;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
      auto restored = decode_checkpoint(buffer.str());
      if (restored.sequence != *it) fail(Errc::RestoreFailed, "sequence does not match file name");
      return restored;
    } catch (const SimError& e) {
      last_error = fmt::format("{}: {}", file_for(*it).filename().string(), e.what());
    }
  }
  fail(Errc::RestoreFailed, fmt::format("no valid checkpoint in {} ({})", dir_.string(), last_error));
}

void CheckpointDir::remove(std::uint64_t sequence) {
  std::error_code ec;
  std::filesystem::remove(file_for(sequence), ec);
}

void CheckpointDir::prune(std::size_t keep) {
  const auto seqs = sequences();
  if (seqs.size() <= keep) return;
  for (std::size_t i = 0; i + keep < seqs.size(); ++i) remove(seqs[i]);
}

}  // namespace imrsim
