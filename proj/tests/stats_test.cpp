#include <gtest/gtest.h>

#include <random>

#include "imrsim/device.hpp"
#include "imrsim/report.hpp"
#include "imrsim/stats.hpp"
#include "test_support.hpp"

namespace imrsim {
namespace {

using testing::error_of;
using testing::small_config;

PhysicalOp write_op(std::uint32_t length, OpCause cause = OpCause::Host) {
  return {OpKind::MediaWrite, 0, 0, 0, length, cause};
}

PhysicalOp read_op(std::uint32_t length, OpCause cause = OpCause::Host) {
  return {OpKind::MediaRead, 0, 1, 0, length, cause};
}

TEST(Stats, PlainWrite) {
  SimStats s;
  const std::vector<PhysicalOp> ops{write_op(8)};
  s.record(ops, Direction::Write, 1.5);
  EXPECT_EQ(s.write_requests, 1u);
  EXPECT_EQ(s.host_writes, 8u);
  EXPECT_EQ(s.media_writes, 8u);
  EXPECT_EQ(s.extra_writes, 0u);
  EXPECT_EQ(s.rmw_events, 0u);
  EXPECT_EQ(s.wa_factor(), 1.0);
  EXPECT_EQ(s.total_write_latency_ms, 1.5);
}

TEST(Stats, InteriorRmwGivesThree) {
  SimStats s;
  const std::vector<PhysicalOp> ops{read_op(1, OpCause::RmwBackupRead), read_op(1, OpCause::RmwBackupRead),
                                    write_op(1), write_op(1, OpCause::RmwRestoreWrite),
                                    write_op(1, OpCause::RmwRestoreWrite)};
  s.record(ops, Direction::Write, 30.0);
  EXPECT_EQ(s.extra_reads, 2u);
  EXPECT_EQ(s.extra_writes, 2u);
  EXPECT_EQ(s.host_reads, 0u);
  EXPECT_EQ(s.rmw_events, 1u);
  EXPECT_EQ(s.wa_factor(), 3.0);
}

TEST(Stats, MixedWorkloadRatio) {
  SimStats s;
  const std::vector<PhysicalOp> host{write_op(10)};
  const std::vector<PhysicalOp> extra{write_op(8, OpCause::RmwRestoreWrite)};
  s.record(host, Direction::Write, 0.0);
  s.record(extra, Direction::Write, 0.0);
  EXPECT_DOUBLE_EQ(s.wa_factor(), 1.8);
}

TEST(Stats, NoWritesIsNoData) {
  SimStats s;
  EXPECT_EQ(error_of([&] { (void)s.wa_factor(); }), Errc::NoData);
  const std::vector<PhysicalOp> ops{read_op(4)};
  s.record(ops, Direction::Read, 2.0);
  EXPECT_EQ(error_of([&] { (void)s.wa_factor(); }), Errc::NoData);
  EXPECT_EQ(s.host_reads, 4u);
}

TEST(Stats, CountRmwEvents) {
  const std::vector<PhysicalOp> ops{write_op(1), write_op(1, OpCause::RmwRestoreWrite),
                                    write_op(1, OpCause::RmwRestoreWrite), read_op(1, OpCause::RmwBackupRead),
                                    write_op(1), write_op(1, OpCause::RmwRestoreWrite)};
  EXPECT_EQ(count_rmw_events(ops), 2u);
}

TEST(Stats, InvariantsHoldOnRandomRun) {
  Device device(small_config(2));
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::uint64_t> pick(0, device.capacity_blocks() - 8);
  std::bernoulli_distribution is_write(0.75);
  SimStats mid;
  for (int i = 0; i < 30000; ++i) {
    device.handle_request({is_write(rng) ? Direction::Write : Direction::Read, pick(rng), 8, std::nullopt});
    const SimStats& s = device.stats();
    ASSERT_EQ(s.media_writes, s.host_writes + s.extra_writes);
    ASSERT_EQ(s.media_reads, s.host_reads + s.extra_reads);
    ASSERT_LE(s.extra_writes, 2 * s.host_writes);
    if (i == 15000) mid = s;
  }
  const SimStats tail = device.stats().since(mid);
  EXPECT_EQ(tail.media_writes, tail.host_writes + tail.extra_writes);
  EXPECT_EQ(tail.read_requests + tail.write_requests, 30000u - 15001u);
}

TEST(Stats, KvDumpRoundTrips) {
  Device device(small_config(1));
  EXPECT_NE(dump_stats_kv(device).find("wa_factor=none\n"), std::string::npos);
  device.handle_request({Direction::Write, 0, 10240, std::nullopt});
  device.handle_request({Direction::Write, 100, 3, std::nullopt});
  device.handle_request({Direction::Read, 7, 9, std::nullopt});
  const std::string dump = dump_stats_kv(device);
  EXPECT_TRUE(dump.starts_with("# imrsim-stats 1\n"));
  EXPECT_EQ(parse_stats_kv(dump), device.stats());
  EXPECT_EQ(error_of([] { parse_stats_kv("host_writes=3\n"); }), Errc::Parse);
}

}  // namespace
}  // namespace imrsim
