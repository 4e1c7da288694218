#include "imrsim/block_store.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "imrsim/errors.hpp"

namespace imrsim {

BlockStore::Payload BlockStore::read(std::uint64_t pba) const {
  if (enabled_) {
    if (auto it = blocks_.find(pba); it != blocks_.end()) return it->second;
  }
  return Payload(block_size_, std::byte{0});
}

void BlockStore::write(std::uint64_t pba, std::span<const std::byte> data) {
  if (!enabled_) return;
  if (data.empty() || std::all_of(data.begin(), data.end(), [](std::byte b) { return b == std::byte{0}; })) {
    blocks_.erase(pba);
    return;
  }
  if (data.size() != block_size_) {
    fail(Errc::Logic, fmt::format("payload of {} bytes for a {}-byte block", data.size(), block_size_));
  }
  blocks_[pba].assign(data.begin(), data.end());
}

void BlockStore::damage(std::uint64_t pba) {
  if (!enabled_) return;
  blocks_[pba].assign(block_size_, kDamagePattern);
}

}  // namespace imrsim
