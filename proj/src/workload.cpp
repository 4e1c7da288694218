#include "imrsim/workload.hpp"

#include <cmath>

#include <fmt/format.h>

#include "imrsim/errors.hpp"

namespace imrsim {

namespace {

std::uint64_t slot_blocks_for(std::uint64_t request_size_bytes, const Device& device) {
  const std::uint32_t block = device.geometry().block_size_bytes;
  if (request_size_bytes == 0 || request_size_bytes % block != 0) {
    fail(Errc::Config, fmt::format("request size {} is not a positive multiple of the {}-byte block",
                                   request_size_bytes, block));
  }
  return request_size_bytes / block;
}

std::uint32_t slot_length(std::uint64_t slot, std::uint64_t slot_blocks, std::uint64_t capacity) {
  const std::uint64_t start = slot * slot_blocks;
  return static_cast<std::uint32_t>(std::min(slot_blocks, capacity - start));
}

}  // namespace

FillStream::FillStream(const WorkloadSpec& spec, const Device& device)
    : slot_blocks_(slot_blocks_for(spec.request_size_bytes, device)),
      capacity_(device.capacity_blocks()),
      random_(spec.kind == WorkloadKind::FillRandom),
      rng_(spec.seed) {
  if (spec.kind == WorkloadKind::Replay) fail(Errc::Config, "fill streams are FillRandom or Sequential");
  if (!(spec.target_utilization >= 0.0 && spec.target_utilization <= 1.0)) {
    fail(Errc::Config, fmt::format("target utilization {} outside [0, 1]", spec.target_utilization));
  }
  const auto target_blocks = static_cast<std::uint64_t>(
      std::ceil(spec.target_utilization * static_cast<double>(capacity_)));
  const std::uint64_t written = device.written_blocks();
  remaining_blocks_ = target_blocks > written ? target_blocks - written : 0;
  if (remaining_blocks_ == 0) return;

  const std::uint64_t slots = (capacity_ + slot_blocks_ - 1) / slot_blocks_;
  for (std::uint64_t s = 0; s < slots; ++s) {
    const std::uint64_t start = s * slot_blocks_;
    const std::uint32_t len = slot_length(s, slot_blocks_, capacity_);
    bool untouched = true;
    for (std::uint64_t b = start; b < start + len && untouched; ++b) untouched = !device.is_written(b);
    if (untouched) free_slots_.push_back(s);
  }
}

std::optional<IoRequest> FillStream::next() {
  if (remaining_blocks_ == 0 || drawn_ == free_slots_.size()) return std::nullopt;
  if (random_) {
    // Partial Fisher-Yates: draw without replacement.
    std::uniform_int_distribution<std::size_t> pick(drawn_, free_slots_.size() - 1);
    std::swap(free_slots_[drawn_], free_slots_[pick(rng_)]);
  }
  const std::uint64_t slot = free_slots_[drawn_++];
  const std::uint32_t len = slot_length(slot, slot_blocks_, capacity_);
  remaining_blocks_ -= std::min<std::uint64_t>(remaining_blocks_, len);
  return IoRequest{Direction::Write, slot * slot_blocks_, len, std::nullopt};
}

std::vector<IoRequest> generate_fill(const WorkloadSpec& spec, const Device& device) {
  FillStream stream(spec, device);
  std::vector<IoRequest> out;
  while (auto request = stream.next()) out.push_back(*request);
  return out;
}

UpdateMixStream::UpdateMixStream(const UpdateMixSpec& spec, const Device& device)
    : spec_(spec),
      slot_blocks_(slot_blocks_for(spec.request_size_bytes, device)),
      capacity_(device.capacity_blocks()),
      rng_(spec.seed) {
  if (!(spec.write_ratio >= 0.0 && spec.write_ratio <= 1.0)) {
    fail(Errc::Config, fmt::format("write ratio {} outside [0, 1]", spec.write_ratio));
  }
  const std::uint64_t slots = (capacity_ + slot_blocks_ - 1) / slot_blocks_;
  for (std::uint64_t s = 0; s < slots; ++s) {
    const std::uint64_t start = s * slot_blocks_;
    const std::uint32_t len = slot_length(s, slot_blocks_, capacity_);
    bool written = true;
    for (std::uint64_t b = start; b < start + len && written; ++b) written = device.is_written(b);
    if (written) slots_.push_back(s);
  }
  if (slots_.empty() && spec.requests > 0) fail(Errc::Config, "update mix needs a preconditioned device");
}

std::optional<IoRequest> UpdateMixStream::next() {
  if (issued_ == spec_.requests) return std::nullopt;
  ++issued_;
  std::uniform_int_distribution<std::size_t> pick(0, slots_.size() - 1);
  std::bernoulli_distribution is_write(spec_.write_ratio);
  const std::uint64_t slot = slots_[pick(rng_)];
  const Direction direction = is_write(rng_) ? Direction::Write : Direction::Read;
  return IoRequest{direction, slot * slot_blocks_, slot_length(slot, slot_blocks_, capacity_),
                   std::nullopt};
}

}  // namespace imrsim
