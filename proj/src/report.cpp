#include "imrsim/report.hpp"

#include <charconv>
#include <map>

#include <fmt/format.h>

#include "imrsim/checkpoint.hpp"
#include "imrsim/errors.hpp"

namespace imrsim {

namespace {

std::string exact(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

std::string wa_text(const SimStats& s) {
  return s.host_writes == 0 ? std::string("none") : exact(s.wa_factor());
}

}  // namespace

std::string dump_stats_kv(const Device& device) {
  const SimStats& s = device.stats();
  std::string out = "# imrsim-stats 1\n";
  auto line = [&out](std::string_view key, const auto& value) {
    out += fmt::format("{}={}\n", key, value);
  };
  line("mode", to_string(device.mode()));
  line("strategy", to_string(device.config().strategy));
  line("capacity_blocks", device.capacity_blocks());
  line("written_blocks", device.written_blocks());
  line("utilization", exact(device.utilization().fraction));
  line("read_requests", s.read_requests);
  line("write_requests", s.write_requests);
  line("host_reads", s.host_reads);
  line("host_writes", s.host_writes);
  line("media_reads", s.media_reads);
  line("media_writes", s.media_writes);
  line("extra_reads", s.extra_reads);
  line("extra_writes", s.extra_writes);
  line("rmw_events", s.rmw_events);
  line("total_read_latency_ms", exact(s.total_read_latency_ms));
  line("total_write_latency_ms", exact(s.total_write_latency_ms));
  line("wa_factor", wa_text(s));
  return out;
}

SimStats parse_stats_kv(std::string_view text) {
  std::map<std::string, std::string, std::less<>> values;
  std::size_t line_number = 0;
  bool header = false;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
    ++line_number;
    if (line.empty()) continue;
    if (line.starts_with('#')) {
      if (line == "# imrsim-stats 1") header = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(Errc::Parse, fmt::format("stats line {}: missing '='", line_number));
    values.emplace(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
  }
  if (!header) fail(Errc::Parse, "stats dump lacks the '# imrsim-stats 1' header");

  auto get = [&values](std::string_view key) -> const std::string& {
    auto it = values.find(key);
    if (it == values.end()) fail(Errc::Parse, fmt::format("stats dump lacks '{}'", key));
    return it->second;
  };
  auto integer = [&](std::string_view key) {
    const std::string& v = get(key);
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) fail(Errc::Parse, fmt::format("bad value for {}", key));
    return out;
  };
  auto real = [&](std::string_view key) {
    const std::string& v = get(key);
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) fail(Errc::Parse, fmt::format("bad value for {}", key));
    return out;
  };

  SimStats s;
  s.read_requests = integer("read_requests");
  s.write_requests = integer("write_requests");
  s.host_reads = integer("host_reads");
  s.host_writes = integer("host_writes");
  s.media_reads = integer("media_reads");
  s.media_writes = integer("media_writes");
  s.extra_reads = integer("extra_reads");
  s.extra_writes = integer("extra_writes");
  s.rmw_events = integer("rmw_events");
  s.total_read_latency_ms = real("total_read_latency_ms");
  s.total_write_latency_ms = real("total_write_latency_ms");
  return s;
}

std::string dump_stats_table(const Device& device) {
  const SimStats& s = device.stats();
  std::string out;
  out += fmt::format("{:<24}{:>20}\n", "mode", to_string(device.mode()));
  out += fmt::format("{:<24}{:>20}\n", "strategy", to_string(device.config().strategy));
  out += fmt::format("{:<24}{:>19.4f}%\n", "utilization", 100.0 * device.utilization().fraction);
  out += fmt::format("{:<24}{:>20}\n", "read requests", s.read_requests);
  out += fmt::format("{:<24}{:>20}\n", "write requests", s.write_requests);
  out += fmt::format("{:<24}{:>20}\n", "host reads (blocks)", s.host_reads);
  out += fmt::format("{:<24}{:>20}\n", "host writes (blocks)", s.host_writes);
  out += fmt::format("{:<24}{:>20}\n", "extra reads (blocks)", s.extra_reads);
  out += fmt::format("{:<24}{:>20}\n", "extra writes (blocks)", s.extra_writes);
  out += fmt::format("{:<24}{:>20}\n", "RMW events", s.rmw_events);
  out += fmt::format("{:<24}{:>20.3f}\n", "read latency (ms)", s.total_read_latency_ms);
  out += fmt::format("{:<24}{:>20.3f}\n", "write latency (ms)", s.total_write_latency_ms);
  out += fmt::format("{:<24}{:>20}\n", "write amplification",
                     s.host_writes == 0 ? std::string("n/a") : fmt::format("{:.4f}", s.wa_factor()));
  return out;
}

std::string dump_stats_json(const Device& device) {
  auto j = stats_to_json(device.stats());
  j["mode"] = to_string(device.mode());
  j["strategy"] = to_string(device.config().strategy);
  j["capacity_blocks"] = device.capacity_blocks();
  j["written_blocks"] = device.written_blocks();
  j["utilization"] = device.utilization().fraction;
  if (device.stats().host_writes == 0) {
    j["wa_factor"] = nullptr;
  } else {
    j["wa_factor"] = device.stats().wa_factor();
  }
  return j.dump(2) + "\n";
}

}  // namespace imrsim
