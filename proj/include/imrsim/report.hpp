#pragma once

#include <string>
#include <string_view>

#include "imrsim/device.hpp"
#include "imrsim/stats.hpp"

namespace imrsim {

/// Machine-readable stats dump, version 1. One `key=value` per line after a
/// `# imrsim-stats 1` header. Counter keys match SimStats field names;
/// latencies use the shortest round-trip decimal form. Also carries mode,
/// strategy, capacity_blocks, written_blocks, utilization and wa_factor
/// (`none` before the first host write).
std::string dump_stats_kv(const Device& device);

/// Inverse of dump_stats_kv for the SimStats counters. Throws SimError(Parse).
SimStats parse_stats_kv(std::string_view text);

std::string dump_stats_table(const Device& device);
std::string dump_stats_json(const Device& device);

}  // namespace imrsim
