#pragma once

#include <cstdint>
#include <span>

#include "imrsim/physical_op.hpp"

namespace imrsim {

/// Operation counters, in blocks unless noted.
///
/// media_writes == host_writes + extra_writes and
/// media_reads == host_reads + extra_reads hold after every record().
struct SimStats {
  std::uint64_t read_requests = 0;
  std::uint64_t write_requests = 0;
  std::uint64_t host_reads = 0;
  std::uint64_t host_writes = 0;
  std::uint64_t media_reads = 0;
  std::uint64_t media_writes = 0;
  std::uint64_t extra_reads = 0;
  std::uint64_t extra_writes = 0;
  std::uint64_t rmw_events = 0;
  double total_read_latency_ms = 0.0;
  double total_write_latency_ms = 0.0;

  /// Accounts one completed host request.
  void record(std::span<const PhysicalOp> ops, Direction direction, double service_ms);

  /// media_writes / host_writes. Throws SimError(NoData) before any write.
  double wa_factor() const;

  /// Counter-wise difference, for measuring one phase of a run.
  SimStats since(const SimStats& earlier) const;

  friend bool operator==(const SimStats&, const SimStats&) = default;
};

/// Number of RMW sequences in an op list: each one ends in a run of
/// restore writes.
std::uint64_t count_rmw_events(std::span<const PhysicalOp> ops);

}  // namespace imrsim
