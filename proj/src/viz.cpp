#include "imrsim/viz.hpp"

#include <json.hpp>
#include <fmt/format.h>

#include "imrsim/errors.hpp"

namespace imrsim {

std::string to_json_line(const VizFrame& frame) {
  nlohmann::ordered_json j;
  j["v"] = 1;
  j["frame"] = frame.frame_index;
  j["request"] = frame.request_index;
  j["zone"] = frame.zone_id;
  j["trigger"] = {{"dir", to_string(frame.trigger.direction)},
                  {"lba", frame.trigger.lba},
                  {"len", frame.trigger.length}};
  auto tracks = nlohmann::ordered_json::array();
  for (const auto& t : frame.tracks) {
    tracks.push_back({{"track", t.track},
                      {"kind", t.kind == TrackKind::Bottom ? "bottom" : "top"},
                      {"blocks", t.blocks}});
  }
  j["tracks"] = std::move(tracks);
  return j.dump();
}

VizRecorder::VizRecorder(const Device& device, std::uint32_t zone_id, std::uint64_t sample_every)
    : layout_(device.layout()), zone_id_(zone_id), sample_every_(sample_every) {
  const DiskGeometry& g = layout_.geometry;
  const std::uint64_t zones = (layout_.total_tracks() + g.tracks_per_zone - 1) / g.tracks_per_zone;
  if (zone_id >= zones) {
    fail(Errc::Usage, fmt::format("zone {} out of range (device has {} zones)", zone_id, zones));
  }
  if (sample_every == 0) fail(Errc::Usage, "sample interval must be at least 1");

  tracks_.resize(g.tracks_per_zone);
  for (std::uint32_t t = 0; t < g.tracks_per_zone; ++t) {
    tracks_[t].assign(layout_.track_size(t), static_cast<char>(BlockState::Free));
  }
  if (layout_.mode == RecordingMode::Imr) {
    const auto forward = device.mapping().forward(zone_id);
    for (std::uint32_t nbo : forward) {
      if (nbo == MappingTable::kUnmapped) continue;
      const TrackBlock pos = locate_in_zone(nbo, g);
      tracks_[pos.track][pos.block] = static_cast<char>(BlockState::Allocated);
    }
  } else {
    const std::uint64_t per_track = g.blocks_per_bottom_track;
    for (std::uint32_t t = 0; t < g.tracks_per_zone; ++t) {
      const std::uint64_t first = (static_cast<std::uint64_t>(zone_id) * g.tracks_per_zone + t) * per_track;
      for (std::uint32_t b = 0; b < per_track && first + b < device.capacity_blocks(); ++b) {
        if (device.is_written(first + b)) tracks_[t][b] = static_cast<char>(BlockState::Allocated);
      }
    }
  }
}

std::optional<VizFrame> VizRecorder::observe(const IoRequest& request,
                                             std::span<const PhysicalOp> ops) {
  for (const PhysicalOp& op : ops) {
    if (op.zone_id != zone_id_ || op.kind != OpKind::MediaWrite) continue;
    std::string& track = tracks_[op.track_offset];
    for (std::uint32_t b = op.block_offset; b < op.block_offset + op.length; ++b) {
      char& state = track[b];
      if (op.cause == OpCause::RmwRestoreWrite) {
        state = static_cast<char>(BlockState::Rewritten);
      } else if (state == static_cast<char>(BlockState::Free)) {
        state = static_cast<char>(BlockState::Allocated);
      }
    }
  }
  last_ = request;
  const std::uint64_t index = requests_++;
  if (index % sample_every_ != 0) return std::nullopt;
  VizFrame frame = snapshot();
  frame.frame_index = frames_++;
  frame.request_index = index;
  return frame;
}

VizFrame VizRecorder::snapshot() const {
  VizFrame frame;
  frame.frame_index = frames_;
  frame.request_index = requests_ == 0 ? 0 : requests_ - 1;
  frame.zone_id = zone_id_;
  frame.trigger = last_;
  for (std::uint32_t t = 0; t < tracks_.size(); ++t) {
    const TrackKind kind = layout_.mode == RecordingMode::Imr && t % 2 == 1 ? TrackKind::Top
                                                                            : TrackKind::Bottom;
    frame.tracks.push_back({t, kind, tracks_[t]});
  }
  return frame;
}

std::string VizRecorder::render_svg() const {
  constexpr double kWidth = 1200.0;
  constexpr double kMargin = 80.0;
  constexpr double kBottomHeight = 18.0;
  constexpr double kTopHeight = 12.0;
  const bool imr = layout_.mode == RecordingMode::Imr;

  double height = 40.0;
  for (std::uint32_t t = 0; t < tracks_.size(); ++t) {
    height += (imr && t % 2 == 1) ? kTopHeight : kBottomHeight;
  }
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "font-family=\"monospace\" font-size=\"10\">\n"
      "<text x=\"4\" y=\"14\">zone {} ({}) free=lightgray allocated=darkgray rewritten=orange</text>\n",
      kWidth + kMargin + 10, height + 10, zone_id_, imr ? "imr" : "cmr");

  double y = 30.0;
  for (std::uint32_t t = 0; t < tracks_.size(); ++t) {
    const bool top = imr && t % 2 == 1;
    const double h = top ? kTopHeight : kBottomHeight;
    const std::string& blocks = tracks_[t];
    const double block_width = kWidth / static_cast<double>(blocks.size());
    svg += fmt::format("<text x=\"4\" y=\"{:.1f}\">{} {}</text>\n", y + h - 3, top ? "T" : "B", t);
    std::size_t start = 0;
    while (start < blocks.size()) {
      std::size_t end = start;
      while (end < blocks.size() && blocks[end] == blocks[start]) ++end;
      const char* fill = blocks[start] == static_cast<char>(BlockState::Free)        ? "lightgray"
                         : blocks[start] == static_cast<char>(BlockState::Allocated) ? "darkgray"
                                                                                      : "orange";
      svg += fmt::format(
          "<rect x=\"{:.2f}\" y=\"{:.1f}\" width=\"{:.2f}\" height=\"{:.1f}\" fill=\"{}\"/>\n",
          kMargin + block_width * static_cast<double>(start), y, block_width * static_cast<double>(end - start),
          h - 1, fill);
      start = end;
    }
    y += h;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace imrsim
