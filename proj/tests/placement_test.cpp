#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <random>

#include "imrsim/device.hpp"
#include "test_support.hpp"

namespace imrsim {
namespace {

using testing::error_of;
using testing::pattern_block;
using testing::small_config;

PhysicalOp op(OpKind kind, std::uint32_t track, std::uint32_t block, OpCause cause,
              std::uint32_t length = 1) {
  return {kind, 0, track, block, length, cause};
}

// Maps every block of zone 0 so that all neighbours are valid.
void fill_zone(Device& device) {
  device.handle_request({Direction::Write, 0, 10240, std::nullopt});
}

std::uint64_t lba_at(const Device& device, std::uint32_t track, std::uint32_t block) {
  const auto nbo = zone_offset_of({track, block}, device.geometry());
  return *device.mapping().reverse_lookup(0, nbo);
}

TEST(Placement, InteriorBottomUpdateIsFiveOps) {
  Device device(small_config(1));
  fill_zone(device);
  ASSERT_EQ(adjacent_top_block(100, device.geometry()), 80u);
  const auto result = device.handle_request({Direction::Write, lba_at(device, 2, 100), 1, std::nullopt});
  const std::vector<PhysicalOp> expected{
      op(OpKind::MediaRead, 1, 80, OpCause::RmwBackupRead),
      op(OpKind::MediaRead, 3, 80, OpCause::RmwBackupRead),
      op(OpKind::MediaWrite, 2, 100, OpCause::Host),
      op(OpKind::MediaWrite, 1, 80, OpCause::RmwRestoreWrite),
      op(OpKind::MediaWrite, 3, 80, OpCause::RmwRestoreWrite),
  };
  EXPECT_EQ(result.ops, expected);
  EXPECT_EQ(count_rmw_events(result.ops), 1u);
}

TEST(Placement, EdgeBottomUpdateHasOneNeighbour) {
  Device device(small_config(1));
  fill_zone(device);
  const auto result = device.handle_request({Direction::Write, lba_at(device, 0, 100), 1, std::nullopt});
  const std::vector<PhysicalOp> expected{
      op(OpKind::MediaRead, 1, 80, OpCause::RmwBackupRead),
      op(OpKind::MediaWrite, 0, 100, OpCause::Host),
      op(OpKind::MediaWrite, 1, 80, OpCause::RmwRestoreWrite),
  };
  EXPECT_EQ(result.ops, expected);
}

TEST(Placement, OnlyValidNeighboursAreProtected) {
  Device device(small_config(1));
  // Bottom tracks plus the whole of track 1: track 3 stays free.
  device.handle_request({Direction::Write, 0, 5680 + 456, std::nullopt});
  const auto result = device.handle_request({Direction::Write, lba_at(device, 2, 100), 1, std::nullopt});
  const std::vector<PhysicalOp> expected{
      op(OpKind::MediaRead, 1, 80, OpCause::RmwBackupRead),
      op(OpKind::MediaWrite, 2, 100, OpCause::Host),
      op(OpKind::MediaWrite, 1, 80, OpCause::RmwRestoreWrite),
  };
  EXPECT_EQ(result.ops, expected);
}

TEST(Placement, RmwUpdateWithoutNeighboursIsLogicError) {
  Device device(small_config(1));
  EXPECT_EQ(error_of([&] { device.rmw_update({0, 2, 100}, {}); }), Errc::Logic);
  EXPECT_EQ(error_of([&] { device.rmw_update({0, 1, 10}, {}); }), Errc::Logic);
  EXPECT_EQ(error_of([&] { device.rmw_update({0, 1, 456}, {}); }), Errc::InvalidTriple);
}

TEST(Placement, RmwUpdateDirect) {
  Device device(small_config(1));
  fill_zone(device);
  const auto ops = device.rmw_update({0, 18, 567}, {});
  const std::vector<PhysicalOp> expected{
      op(OpKind::MediaRead, 17, 455, OpCause::RmwBackupRead),
      op(OpKind::MediaRead, 19, 455, OpCause::RmwBackupRead),
      op(OpKind::MediaWrite, 18, 567, OpCause::Host),
      op(OpKind::MediaWrite, 17, 455, OpCause::RmwRestoreWrite),
      op(OpKind::MediaWrite, 19, 455, OpCause::RmwRestoreWrite),
  };
  EXPECT_EQ(ops, expected);
}

TEST(Placement, CmrWriteIsOneRun) {
  Device device(small_config(1, RecordingMode::Cmr));
  const auto result = device.handle_request({Direction::Write, 0, 8, std::nullopt});
  ASSERT_EQ(result.ops.size(), 1u);
  EXPECT_EQ(result.ops[0], op(OpKind::MediaWrite, 0, 0, OpCause::Host, 8));
  const auto again = device.handle_request({Direction::Write, 0, 8, std::nullopt});
  EXPECT_EQ(again.ops, result.ops);
  EXPECT_EQ(device.stats().extra_writes, 0u);
}

TEST(Placement, CmrRunSplitsAtTrackEnd) {
  Device device(small_config(1, RecordingMode::Cmr));
  const auto result = device.handle_request({Direction::Write, 566, 4, std::nullopt});
  const std::vector<PhysicalOp> expected{
      op(OpKind::MediaWrite, 0, 566, OpCause::Host, 2),
      op(OpKind::MediaWrite, 1, 0, OpCause::Host, 2),
  };
  EXPECT_EQ(result.ops, expected);
}

TEST(Placement, TopTrackUpdateIsSingleWrite) {
  Device device(small_config(1));
  fill_zone(device);
  const auto lba = lba_at(device, 5, 17);
  const auto result = device.handle_request({Direction::Write, lba, 1, std::nullopt});
  ASSERT_EQ(result.ops.size(), 1u);
  EXPECT_EQ(result.ops[0], op(OpKind::MediaWrite, 5, 17, OpCause::Host));
}

TEST(Placement, FirstWritesNeverRmwBelowStageBoundary) {
  Device device(small_config(2));
  std::mt19937_64 rng(11);
  std::vector<std::uint64_t> lbas(device.capacity_blocks());
  std::iota(lbas.begin(), lbas.end(), 0u);
  std::shuffle(lbas.begin(), lbas.end(), rng);
  // Both zones filled to exactly their bottom tracks.
  std::array<std::uint32_t, 2> per_zone{};
  for (auto lba : lbas) {
    const auto zone = lba / 10240;
    if (per_zone[zone] == 5680) continue;
    ++per_zone[zone];
    device.handle_request({Direction::Write, lba, 1, std::nullopt});
  }
  EXPECT_EQ(device.stats().rmw_events, 0u);
  EXPECT_EQ(device.stats().wa_factor(), 1.0);
}

TEST(Placement, UnmappedReadUsesIdentityPosition) {
  Device device(small_config(1));
  const auto result = device.handle_request({Direction::Read, 568, 1, std::nullopt});
  ASSERT_EQ(result.ops.size(), 1u);
  EXPECT_EQ(result.ops[0], op(OpKind::MediaRead, 1, 0, OpCause::Host));
  EXPECT_EQ(device.written_blocks(), 0u);
}

TEST(Placement, DataSurvivesUpdatesAgainstShadowMap) {
  Device device(small_config(2, RecordingMode::Imr, true));
  const std::uint32_t bs = device.geometry().block_size_bytes;
  std::map<std::uint64_t, std::vector<std::byte>> shadow;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> pick(0, device.capacity_blocks() - 8);
  std::uniform_int_distribution<std::uint32_t> len(1, 8);
  std::bernoulli_distribution is_write(0.7);
  std::uint64_t tag = 1;
  for (int i = 0; i < 20000; ++i) {
    const IoRequest request{is_write(rng) ? Direction::Write : Direction::Read, pick(rng), len(rng),
                            std::nullopt};
    if (request.direction == Direction::Write) {
      std::vector<std::byte> payload;
      for (std::uint32_t b = 0; b < request.length; ++b) {
        auto block = pattern_block(bs, tag++);
        shadow[request.lba + b] = block;
        payload.insert(payload.end(), block.begin(), block.end());
      }
      device.handle_request(request, payload);
    } else {
      const auto result = device.handle_request(request);
      ASSERT_EQ(result.data.size(), std::size_t{request.length} * bs);
      for (std::uint32_t b = 0; b < request.length; ++b) {
        const auto it = shadow.find(request.lba + b);
        const std::vector<std::byte> expected =
            it == shadow.end() ? std::vector<std::byte>(bs) : it->second;
        ASSERT_TRUE(std::equal(expected.begin(), expected.end(), result.data.begin() + std::size_t{b} * bs))
            << "request " << i << " block " << request.lba + b;
      }
    }
  }
  EXPECT_GT(device.stats().rmw_events, 0u);
}

TEST(Placement, SameInputSameOps) {
  auto run = [] {
    Device device(small_config(1));
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::uint64_t> pick(0, 10239);
    std::vector<std::vector<PhysicalOp>> trace;
    for (int i = 0; i < 3000; ++i) {
      trace.push_back(device.handle_request({Direction::Write, pick(rng), 1, std::nullopt}).ops);
    }
    return std::pair{trace, device.stats()};
  };
  EXPECT_EQ(run(), run());
}

TEST(Placement, RejectedRequestChangesNothing) {
  Device device(small_config(1));
  device.handle_request({Direction::Write, 10, 4, std::nullopt});
  const SimStats before = device.stats();
  const HeadState head = device.head();
  EXPECT_EQ(error_of([&] { device.handle_request({Direction::Write, 10238, 4, std::nullopt}); }),
            Errc::AddressIllegal);
  EXPECT_EQ(error_of([&] { device.handle_request({Direction::Read, 0, 0, std::nullopt}); }),
            Errc::AddressIllegal);
  const std::vector<std::byte> short_payload(100);
  EXPECT_EQ(error_of([&] { device.handle_request({Direction::Write, 0, 1, std::nullopt}, short_payload); }),
            Errc::Logic);
  EXPECT_EQ(device.stats(), before);
  EXPECT_EQ(device.head(), head);
  EXPECT_EQ(device.written_blocks(), 4u);
}

TEST(Placement, CoalesceMergesOnlyContiguousRuns) {
  const std::vector<PhysicalOp> raw{
      op(OpKind::MediaWrite, 0, 4, OpCause::Host), op(OpKind::MediaWrite, 0, 5, OpCause::Host),
      op(OpKind::MediaWrite, 0, 7, OpCause::Host), op(OpKind::MediaRead, 0, 8, OpCause::Host),
      op(OpKind::MediaRead, 0, 9, OpCause::RmwBackupRead)};
  const auto merged = coalesce(raw);
  ASSERT_EQ(merged.size(), 4u);
  EXPECT_EQ(merged[0].length, 2u);
  std::uint32_t total = 0;
  for (const auto& m : merged) total += m.length;
  EXPECT_EQ(total, raw.size());
}

}  // namespace
}  // namespace imrsim
