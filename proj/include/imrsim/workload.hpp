#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "imrsim/device.hpp"
#include "imrsim/physical_op.hpp"

namespace imrsim {

enum class WorkloadKind : std::uint8_t { FillRandom, Sequential, Replay };

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::FillRandom;
  std::uint64_t request_size_bytes = 32768;
  double target_utilization = 0.0;
  std::uint64_t seed = 1;
};

/// First-write preconditioning. The logical space is cut into
/// request-size slots; slots with no written block are issued as writes
/// (in random order for FillRandom, ascending for Sequential) until the
/// device's written fraction reaches the target. No block is written twice.
///
/// The plan is fixed from the device's written blocks at construction;
/// submitting requests between pulls does not change the sequence.
class FillStream {
 public:
  /// Throws SimError(Config) for a target outside [0, 1], a Replay spec, or a
  /// request size that is not a positive multiple of the block size.
  FillStream(const WorkloadSpec& spec, const Device& device);

  std::optional<IoRequest> next();

 private:
  std::uint64_t slot_blocks_ = 0;
  std::uint64_t capacity_ = 0;
  std::uint64_t remaining_blocks_ = 0;
  bool random_ = true;
  std::vector<std::uint64_t> free_slots_;
  std::size_t drawn_ = 0;
  std::mt19937_64 rng_;
};

std::vector<IoRequest> generate_fill(const WorkloadSpec& spec, const Device& device);

/// Random read/update mix over slots already written on the device, in the
/// spirit of a write-intensive production trace replayed after
/// preconditioning. Utilization stays fixed since only written slots are hit.
struct UpdateMixSpec {
  std::uint64_t requests = 20000;
  double write_ratio = 0.7463;
  std::uint64_t request_size_bytes = 32768;
  std::uint64_t seed = 1;
};

class UpdateMixStream {
 public:
  UpdateMixStream(const UpdateMixSpec& spec, const Device& device);

  std::optional<IoRequest> next();
  std::size_t candidate_slots() const { return slots_.size(); }

 private:
  UpdateMixSpec spec_;
  std::uint64_t slot_blocks_ = 0;
  std::uint64_t capacity_ = 0;
  std::vector<std::uint64_t> slots_;
  std::uint64_t issued_ = 0;
  std::mt19937_64 rng_;
};

}  // namespace imrsim
