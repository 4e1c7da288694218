#pragma once

#include <cstdint>
#include <span>

#include "imrsim/geometry.hpp"
#include "imrsim/physical_op.hpp"

namespace imrsim {

/// Mechanical timing of the simulated drive. Times are in milliseconds.
///
/// Seek time is linear in track distance between `seek_settle_ms` (one
/// track) and `full_stroke_seek_ms` (total_tracks - 1); zero distance costs
/// nothing. Head switches are folded into the settle time.
struct MechanicalModel {
  double rpm = 5400.0;
  double seek_settle_ms = 1.0;
  double full_stroke_seek_ms = 20.0;
  std::uint64_t total_tracks = 1;

  double revolution_ms() const { return 60000.0 / rpm; }
  double seek_time(std::uint64_t track_distance) const;
  void validate() const;

  friend bool operator==(const MechanicalModel&, const MechanicalModel&) = default;
};

/// Head position. `angle` is in revolutions, [0, 1); all tracks share the
/// same angular origin.
struct HeadState {
  std::uint64_t current_track = 0;
  double angle = 0.0;
  double clock_ms = 0.0;

  friend bool operator==(const HeadState&, const HeadState&) = default;
};

/// Step the head through `ops` in order: seek, rotate forward to the first
/// block's angle, transfer. Advances `head` and returns the elapsed time.
double service(std::span<const PhysicalOp> ops, HeadState& head, const MechanicalModel& model,
               const TrackLayout& layout);

}  // namespace imrsim
