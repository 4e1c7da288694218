#include "imrsim/latency.hpp"

#include <cmath>

#include "imrsim/errors.hpp"

namespace imrsim {

namespace {

// Angles that differ by less than this are treated as equal so that
// float noise never turns a zero wait into a full revolution.
constexpr double kAngleEpsilon = 1e-12;

double forward_gap(double from, double to) {
  double gap = to - from;
  gap -= std::floor(gap);
  if (gap > 1.0 - kAngleEpsilon || gap < kAngleEpsilon) return 0.0;
  return gap;
}

double wrap(double angle) { return angle - std::floor(angle); }

}  // namespace

double MechanicalModel::seek_time(std::uint64_t track_distance) const {
  if (track_distance == 0) return 0.0;
  if (total_tracks <= 1) return seek_settle_ms;
  return seek_settle_ms + (full_stroke_seek_ms - seek_settle_ms) *
                              static_cast<double>(track_distance) /
                              static_cast<double>(total_tracks - 1);
}

void MechanicalModel::validate() const {
  if (!(rpm > 0.0) || !std::isfinite(rpm)) fail(Errc::Config, "rpm must be positive");
  if (!(seek_settle_ms >= 0.0)) fail(Errc::Config, "seek settle time must be non-negative");
  if (!(full_stroke_seek_ms >= seek_settle_ms) || !std::isfinite(full_stroke_seek_ms)) {
    fail(Errc::Config, "full-stroke seek must be at least the settle time");
  }
  if (total_tracks == 0) fail(Errc::Config, "model needs at least one track");
}

double service(std::span<const PhysicalOp> ops, HeadState& head, const MechanicalModel& model,
               const TrackLayout& layout) {
  const double revolution = model.revolution_ms();
  double elapsed = 0.0;
  for (const PhysicalOp& op : ops) {
    const std::uint64_t track = layout.global_track(op.zone_id, op.track_offset);
    const std::uint64_t distance =
        track > head.current_track ? track - head.current_track : head.current_track - track;
    const double seek = model.seek_time(distance);
    head.current_track = track;
    head.angle = wrap(head.angle + seek / revolution);

    const double blocks = layout.track_size(op.track_offset);
    const double start = static_cast<double>(op.block_offset) / blocks;
    const double wait = forward_gap(head.angle, start) * revolution;

    const double transfer = static_cast<double>(op.length) * revolution / blocks;
    head.angle = wrap(static_cast<double>(op.block_offset + op.length) / blocks);

    const double step = seek + wait + transfer;
    head.clock_ms += step;
    elapsed += step;
  }
  return elapsed;
}

}  // namespace imrsim
