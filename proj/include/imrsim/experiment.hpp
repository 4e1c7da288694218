#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imrsim/config.hpp"
#include "imrsim/stats.hpp"
#include "imrsim/workload.hpp"

namespace imrsim {

/// One point of a write-amplification-versus-usage sweep: precondition a
/// fresh device with random 32 KB first writes up to `utilization`, then run
/// an update mix and measure that phase alone.
struct ExperimentPoint {
  RecordingMode mode = RecordingMode::Imr;
  AllocationStrategy strategy = AllocationStrategy::TwoStage;
  double utilization = 0.0;
  std::uint64_t seed = 0;
  SimStats fill;
  SimStats workload;

  /// Workload-phase write amplification (1.0 when it issued no writes).
  double wa() const { return workload.host_writes == 0 ? 1.0 : workload.wa_factor(); }
};

ExperimentPoint run_point(const DeviceConfig& config, double utilization, const UpdateMixSpec& mix);

std::string experiment_csv_header();
std::string to_csv_row(const ExperimentPoint& point);

}  // namespace imrsim
