#include "imrsim/experiment.hpp"

#include <fmt/format.h>

#include "imrsim/device.hpp"

namespace imrsim {

ExperimentPoint run_point(const DeviceConfig& config, double utilization, const UpdateMixSpec& mix) {
  Device device(config);
  WorkloadSpec fill;
  fill.kind = WorkloadKind::FillRandom;
  fill.request_size_bytes = 32768;
  fill.target_utilization = utilization;
  fill.seed = mix.seed;
  FillStream fill_stream(fill, device);
  while (auto request = fill_stream.next()) device.handle_request(*request);

  ExperimentPoint point;
  point.mode = config.mode;
  point.strategy = config.strategy;
  point.utilization = utilization;
  point.seed = mix.seed;
  point.fill = device.stats();

  UpdateMixSpec update = mix;
  // Decorrelate the update stream from the fill stream.
  update.seed = mix.seed ^ 0x9E3779B97F4A7C15ull;
  UpdateMixStream updates(update, device);
  while (auto request = updates.next()) device.handle_request(*request);
  point.workload = device.stats().since(point.fill);
  return point;
}

std::string experiment_csv_header() {
  return "mode,strategy,utilization,seed,wa,host_writes,extra_writes,extra_reads,rmw_events,"
         "write_latency_ms,read_latency_ms";
}

std::string to_csv_row(const ExperimentPoint& p) {
  return fmt::format("{},{},{:.4f},{},{:.6f},{},{},{},{},{:.3f},{:.3f}", to_string(p.mode),
                     p.mode == RecordingMode::Cmr ? "n/a" : to_string(p.strategy), p.utilization,
                     p.seed, p.wa(), p.workload.host_writes, p.workload.extra_writes,
                     p.workload.extra_reads, p.workload.rmw_events, p.workload.total_write_latency_ms,
                     p.workload.total_read_latency_ms);
}

}  // namespace imrsim
