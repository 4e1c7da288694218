#include "imrsim/stats.hpp"

#include "imrsim/errors.hpp"

namespace imrsim {

std::uint64_t count_rmw_events(std::span<const PhysicalOp> ops) {
  std::uint64_t events = 0;
  bool in_restore = false;
  for (const PhysicalOp& op : ops) {
    const bool restore = op.cause == OpCause::RmwRestoreWrite;
    if (restore && !in_restore) ++events;
    in_restore = restore;
  }
  return events;
}

void SimStats::record(std::span<const PhysicalOp> ops, Direction direction, double service_ms) {
  if (direction == Direction::Read) {
    ++read_requests;
    total_read_latency_ms += service_ms;
  } else {
    ++write_requests;
    total_write_latency_ms += service_ms;
  }
  for (const PhysicalOp& op : ops) {
    if (op.kind == OpKind::MediaRead) {
      media_reads += op.length;
      (op.cause == OpCause::Host ? host_reads : extra_reads) += op.length;
    } else {
      media_writes += op.length;
      (op.cause == OpCause::Host ? host_writes : extra_writes) += op.length;
    }
  }
  rmw_events += count_rmw_events(ops);
}

double SimStats::wa_factor() const {
  if (host_writes == 0) fail(Errc::NoData, "no host writes recorded yet");
  return static_cast<double>(media_writes) / static_cast<double>(host_writes);
}

SimStats SimStats::since(const SimStats& earlier) const {
  SimStats d;
  d.read_requests = read_requests - earlier.read_requests;
  d.write_requests = write_requests - earlier.write_requests;
  d.host_reads = host_reads - earlier.host_reads;
  d.host_writes = host_writes - earlier.host_writes;
  d.media_reads = media_reads - earlier.media_reads;
  d.media_writes = media_writes - earlier.media_writes;
  d.extra_reads = extra_reads - earlier.extra_reads;
  d.extra_writes = extra_writes - earlier.extra_writes;
  d.rmw_events = rmw_events - earlier.rmw_events;
  d.total_read_latency_ms = total_read_latency_ms - earlier.total_read_latency_ms;
  d.total_write_latency_ms = total_write_latency_ms - earlier.total_write_latency_ms;
  return d;
}

}  // namespace imrsim
