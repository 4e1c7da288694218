#include <gtest/gtest.h>

#include <random>
#include <set>

#include "imrsim/errors.hpp"
#include "imrsim/geometry.hpp"

namespace imrsim {
namespace {

DiskGeometry defaults(std::uint32_t zones = 4) {
  DiskGeometry g;
  g.zone_count = zones;
  return g;
}

DiskGeometry tiny() {
  DiskGeometry g;
  g.block_size_bytes = 512;
  g.blocks_per_bottom_track = 5;
  g.blocks_per_top_track = 4;
  g.tracks_per_zone = 4;
  g.zone_count = 2;
  return g;
}

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const SimError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected SimError";
  return Errc::Logic;
}

TEST(Geometry, DefaultShape) {
  const DiskGeometry g = defaults();
  EXPECT_EQ(g.zone_capacity(), 10240u);
  EXPECT_EQ(g.capacity_blocks(), 4u * 10240u);
  const double ratio = static_cast<double>(g.blocks_per_bottom_track) / g.blocks_per_top_track;
  EXPECT_NEAR(ratio, 1.246, 0.01);
  EXPECT_NO_THROW(g.validate());
}

TEST(Geometry, ValidationRejectsBadShapes) {
  DiskGeometry g = defaults();
  g.tracks_per_zone = 7;
  EXPECT_EQ(error_of([&] { g.validate(); }), Errc::Config);
  g = defaults();
  g.blocks_per_top_track = g.blocks_per_bottom_track;
  EXPECT_EQ(error_of([&] { g.validate(); }), Errc::Config);
  g = defaults();
  g.zone_count = 0;
  EXPECT_EQ(error_of([&] { g.validate(); }), Errc::Config);
}

TEST(Geometry, CapacityRoundsDownToWholeZones) {
  DiskGeometry shape;
  const auto g = DiskGeometry::for_capacity(128ull << 30, shape);
  EXPECT_EQ(g.zone_count, 3276u);
  const auto one = DiskGeometry::for_capacity(1ull << 30, shape);
  EXPECT_EQ(one.zone_count, 25u);
  EXPECT_EQ(error_of([&] { DiskGeometry::for_capacity(4096, shape); }), Errc::Config);
}

TEST(Geometry, AtExamples) {
  const DiskGeometry g = defaults();
  EXPECT_EQ(at(0, g), (BlockTriple{0, 0, 0}));
  EXPECT_EQ(at(568, g), (BlockTriple{0, 1, 0}));
  EXPECT_EQ(at(10240, g), (BlockTriple{1, 0, 0}));
  EXPECT_EQ(at(567, g), (BlockTriple{0, 0, 567}));
  EXPECT_EQ(at(1024, g), (BlockTriple{0, 2, 0}));
  EXPECT_EQ(error_of([&] { at(g.capacity_blocks(), g); }), Errc::AddressIllegal);
}

TEST(Geometry, AtInverseExamples) {
  const DiskGeometry g = defaults();
  EXPECT_EQ(at_inverse({0, 0, 0}, g), 0u);
  EXPECT_EQ(at_inverse({0, 1, 0}, g), 568u);
  EXPECT_EQ(at_inverse({1, 0, 0}, g), 10240u);
  EXPECT_EQ(error_of([&] { at_inverse({0, 1, 456}, g); }), Errc::InvalidTriple);
  EXPECT_EQ(error_of([&] { at_inverse({0, 20, 0}, g); }), Errc::InvalidTriple);
  EXPECT_EQ(error_of([&] { at_inverse({4, 0, 0}, g); }), Errc::InvalidTriple);
}

// Brute-force oracle: walk zones, tracks and blocks in canonical order.
TEST(Geometry, AtMatchesEnumerationOracle) {
  for (const DiskGeometry& g : {tiny(), defaults(2)}) {
    std::uint64_t flat = 0;
    for (std::uint32_t z = 0; z < g.zone_count; ++z) {
      for (std::uint32_t t = 0; t < g.tracks_per_zone; ++t) {
        const std::uint32_t size = t % 2 == 0 ? g.blocks_per_bottom_track : g.blocks_per_top_track;
        for (std::uint32_t b = 0; b < size; ++b, ++flat) {
          ASSERT_EQ(at(flat, g), (BlockTriple{z, t, b})) << flat;
          ASSERT_EQ(at_inverse({z, t, b}, g), flat);
        }
      }
    }
    EXPECT_EQ(flat, g.capacity_blocks());
  }
}

TEST(Geometry, ZoneTracksTileWithoutGaps) {
  const DiskGeometry g = defaults(1);
  std::uint32_t expected_start = 0;
  for (std::uint32_t t = 0; t < g.tracks_per_zone; ++t) {
    EXPECT_EQ(g.track_start(t), expected_start);
    expected_start += g.track_size(t);
  }
  EXPECT_EQ(expected_start, g.zone_capacity());
}

TEST(Geometry, RandomRoundTripOnDefaults) {
  const DiskGeometry g = DiskGeometry::for_capacity(128ull << 30, DiskGeometry{});
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> pick(0, g.capacity_blocks() - 1);
  for (int i = 0; i < 100000; ++i) {
    const auto x = pick(rng);
    ASSERT_EQ(at_inverse(at(x, g), g), x);
  }
}

TEST(Geometry, TrackKind) {
  const DiskGeometry g = defaults();
  EXPECT_EQ(track_kind(0, g), TrackKind::Bottom);
  EXPECT_EQ(track_kind(1, g), TrackKind::Top);
  EXPECT_EQ(track_kind(18, g), TrackKind::Bottom);
  EXPECT_EQ(track_kind(19, g), TrackKind::Top);
  EXPECT_EQ(error_of([&] { track_kind(20, g); }), Errc::InvalidTriple);
}

TEST(Geometry, TopNeighbors) {
  const DiskGeometry g = defaults();
  auto as_vector = [](const NeighborSet& n) { return std::vector<std::uint32_t>(n.begin(), n.end()); };
  EXPECT_EQ(as_vector(top_neighbors(2, g)), (std::vector<std::uint32_t>{1, 3}));
  EXPECT_EQ(as_vector(top_neighbors(0, g)), (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(as_vector(top_neighbors(18, g)), (std::vector<std::uint32_t>{17, 19}));
  EXPECT_EQ(error_of([&] { top_neighbors(3, g); }), Errc::Logic);
}

TEST(Geometry, AdjacentTopBlockExamples) {
  const DiskGeometry g = defaults();
  EXPECT_EQ(adjacent_top_block(0, g), 0u);
  EXPECT_EQ(adjacent_top_block(284, g), 228u);
  EXPECT_EQ(adjacent_top_block(567, g), 455u);
}

TEST(Geometry, AdjacentTopBlockMonotoneAndSurjective) {
  for (const DiskGeometry& g : {tiny(), defaults()}) {
    std::set<std::uint32_t> hit;
    std::uint32_t previous = 0;
    for (std::uint32_t i = 0; i < g.blocks_per_bottom_track; ++i) {
      const auto j = adjacent_top_block(i, g);
      EXPECT_GE(j, previous);
      EXPECT_LT(j, g.blocks_per_top_track);
      previous = j;
      hit.insert(j);
    }
    EXPECT_EQ(hit.size(), g.blocks_per_top_track);
  }
}

TEST(Geometry, CmrLayoutUsesUniformTracks) {
  TrackLayout layout{defaults(2), RecordingMode::Cmr};
  EXPECT_EQ(layout.track_size(1), 568u);
  EXPECT_EQ(layout.total_tracks(), (2u * 10240u + 567u) / 568u);
  TrackLayout imr{defaults(2), RecordingMode::Imr};
  EXPECT_EQ(imr.track_size(1), 456u);
  EXPECT_EQ(imr.total_tracks(), 40u);
}

}  // namespace
}  // namespace imrsim
