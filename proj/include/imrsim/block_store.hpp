#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace imrsim {

/// Payload oracle keyed by physical flat address.
///
/// Unwritten blocks read as zeros. A disabled store keeps nothing and every
/// read returns zeros. Only media writes (write() and damage()) mutate it.
class BlockStore {
 public:
  using Payload = std::vector<std::byte>;

  static constexpr std::byte kDamagePattern{0xDB};

  BlockStore(std::uint32_t block_size_bytes, bool enabled)
      : block_size_(block_size_bytes), enabled_(enabled) {}

  bool enabled() const { return enabled_; }
  std::uint32_t block_size() const { return block_size_; }

  Payload read(std::uint64_t pba) const;
  /// `data` is either one block or empty (meaning zeros).
  void write(std::uint64_t pba, std::span<const std::byte> data);
  /// Overwrites a block with a garbage pattern: what a wide bottom-track
  /// write does to the top-track block beside it.
  void damage(std::uint64_t pba);

  const std::unordered_map<std::uint64_t, Payload>& blocks() const { return blocks_; }
  void load(std::unordered_map<std::uint64_t, Payload> blocks) { blocks_ = std::move(blocks); }

 private:
  std::uint32_t block_size_;
  bool enabled_;
  std::unordered_map<std::uint64_t, Payload> blocks_;
};

}  // namespace imrsim
