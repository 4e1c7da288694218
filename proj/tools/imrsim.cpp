// imrsim: command-line front end for the interlaced magnetic recording
// simulator. See README.md for the command reference.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "imrsim/checkpoint.hpp"
#include "imrsim/config.hpp"
#include "imrsim/errors.hpp"
#include "imrsim/experiment.hpp"
#include "imrsim/report.hpp"
#include "imrsim/session.hpp"
#include "imrsim/trace.hpp"
#include "imrsim/viz.hpp"
#include "imrsim/workload.hpp"

namespace {

using namespace imrsim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitState = 4;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::Usage:
    case Errc::Config:
      return kExitUsage;
    case Errc::Io:
    case Errc::Parse:
      return kExitIo;
    default:
      return kExitState;
  }
}

std::string default_dir() {
  if (const char* env = std::getenv("IMRSIM_DIR"); env != nullptr && *env != '\0') return env;
  return "imrsim-device";
}

struct CreateOptions {
  std::string config_file;
  std::string capacity = "128GiB";
  std::string mode = "imr";
  std::string strategy = "two-stage";
  std::uint32_t zone_tracks = 0;
  std::uint32_t bottom_blocks = 0;
  std::uint32_t top_blocks = 0;
  std::uint32_t block_size = 0;
  double rpm = 0;
  double seek_settle = -1;
  double full_stroke = -1;
  std::uint64_t flush_interval = 0;
  bool store_payloads = false;
};

DeviceConfig build_config(const CreateOptions& o, const CLI::App& cmd) {
  DeviceConfig config;
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) fail(Errc::Io, fmt::format("cannot read config file {}", o.config_file));
    try {
      config = config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::Config, fmt::format("{}: {}", o.config_file, e.what()));
    }
  }
  if (o.config_file.empty() || cmd.count("--capacity") > 0) config.capacity_bytes = parse_size(o.capacity);
  if (cmd.count("--mode") > 0) {
    auto mode = parse_mode(o.mode);
    if (!mode) fail(Errc::Usage, fmt::format("unknown mode '{}' (use imr or cmr)", o.mode));
    config.mode = *mode;
  }
  if (cmd.count("--strategy") > 0) {
    auto strategy = parse_strategy(o.strategy);
    if (!strategy) fail(Errc::Usage, fmt::format("unknown strategy '{}' (use two-stage or three-stage)", o.strategy));
    config.strategy = *strategy;
  }
  if (cmd.count("--zone-tracks") > 0) config.shape.tracks_per_zone = o.zone_tracks;
  if (cmd.count("--bottom-blocks") > 0) config.shape.blocks_per_bottom_track = o.bottom_blocks;
  if (cmd.count("--top-blocks") > 0) config.shape.blocks_per_top_track = o.top_blocks;
  if (cmd.count("--block-size") > 0) config.shape.block_size_bytes = o.block_size;
  if (cmd.count("--rpm") > 0) config.rpm = o.rpm;
  if (cmd.count("--seek-settle-ms") > 0) config.seek_settle_ms = o.seek_settle;
  if (cmd.count("--full-stroke-ms") > 0) config.full_stroke_seek_ms = o.full_stroke;
  if (cmd.count("--flush-interval") > 0) config.flush_interval = o.flush_interval;
  if (cmd.count("--store-payloads") > 0) config.store_payloads = o.store_payloads;
  config.validate();
  return config;
}

void apply_setting(DeviceConfig& config, const std::string& key, const std::string& value) {
  auto number = [&](auto& field) {
    std::istringstream in(value);
    std::remove_reference_t<decltype(field)> parsed{};
    if (!(in >> parsed) || !in.eof()) fail(Errc::Usage, fmt::format("'{}' is not a valid value for {}", value, key));
    field = parsed;
  };
  if (key == "allocation" || key == "strategy") {
    auto strategy = parse_strategy(value);
    if (!strategy) fail(Errc::Usage, fmt::format("unknown allocation strategy '{}' (use two-stage or three-stage)", value));
    config.strategy = *strategy;
  } else if (key == "flush-interval") {
    number(config.flush_interval);
  } else if (key == "rpm") {
    number(config.rpm);
  } else if (key == "seek-settle-ms") {
    number(config.seek_settle_ms);
  } else if (key == "full-stroke-ms") {
    number(config.full_stroke_seek_ms);
  } else {
    fail(Errc::Usage, fmt::format("unknown key '{}' (settable: allocation, flush-interval, rpm, "
                                  "seek-settle-ms, full-stroke-ms)", key));
  }
}

WorkloadKind parse_pattern(const std::string& pattern) {
  if (pattern == "random") return WorkloadKind::FillRandom;
  if (pattern == "sequential") return WorkloadKind::Sequential;
  fail(Errc::Usage, fmt::format("unknown fill pattern '{}' (use random or sequential)", pattern));
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      fail(Errc::Usage, fmt::format("'{}' is not a number", item));
    }
  }
  if (out.empty()) fail(Errc::Usage, "empty list");
  return out;
}

struct ReplaySummary {
  std::uint64_t records = 0;
  std::uint64_t requests = 0;
  std::size_t skipped = 0;
};

template <typename Sink>
ReplaySummary replay_trace(Session& session, const std::string& path, std::uint64_t limit, Sink&& sink) {
  TraceReader reader(path);
  ReplaySummary summary;
  Device& device = session.device();
  while (limit == 0 || summary.records < limit) {
    auto record = reader.next();
    if (!record) break;
    ++summary.records;
    for (const IoRequest& request :
         to_requests(*record, device.geometry().block_size_bytes, device.capacity_blocks())) {
      auto result = session.submit(request);
      sink(request, result);
      ++summary.requests;
    }
  }
  summary.skipped = reader.skipped_unknown();
  return summary;
}

template <typename Sink>
std::uint64_t run_fill(Session& session, const WorkloadSpec& spec, Sink&& sink) {
  FillStream stream(spec, session.device());
  std::uint64_t issued = 0;
  while (auto request = stream.next()) {
    auto result = session.submit(*request);
    sink(*request, result);
    ++issued;
  }
  return issued;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) fail(Errc::Io, fmt::format("cannot write {}", path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"imrsim - interlaced magnetic recording disk simulator"};
  app.require_subcommand(1);
  std::string dir = default_dir();
  app.add_option("-d,--dir", dir, "Device checkpoint directory (env IMRSIM_DIR)");

  // create
  CreateOptions create;
  auto* create_cmd = app.add_subcommand("create", "Create an empty simulated device");
  create_cmd->add_option("--config", create.config_file, "JSON device config file");
  create_cmd->add_option("--capacity", create.capacity, "Capacity, e.g. 1GiB or 128GiB");
  create_cmd->add_option("--mode", create.mode, "imr or cmr");
  create_cmd->add_option("--strategy", create.strategy, "two-stage or three-stage");
  create_cmd->add_option("--zone-tracks", create.zone_tracks, "Tracks per zone (even)");
  create_cmd->add_option("--bottom-blocks", create.bottom_blocks, "Blocks per bottom track");
  create_cmd->add_option("--top-blocks", create.top_blocks, "Blocks per top track");
  create_cmd->add_option("--block-size", create.block_size, "Block size in bytes");
  create_cmd->add_option("--rpm", create.rpm, "Spindle speed");
  create_cmd->add_option("--seek-settle-ms", create.seek_settle, "One-track seek time (ms)");
  create_cmd->add_option("--full-stroke-ms", create.full_stroke, "Full-stroke seek time (ms)");
  create_cmd->add_option("--flush-interval", create.flush_interval, "Checkpoint every N requests");
  create_cmd->add_flag("--store-payloads", create.store_payloads, "Keep block payloads in memory");

  // config
  auto* config_cmd = app.add_subcommand("config", "Show or change device settings");
  config_cmd->require_subcommand(1);
  auto* config_show = config_cmd->add_subcommand("show", "Print the device config as JSON");
  std::string set_key, set_value;
  auto* config_set = config_cmd->add_subcommand("set", "Change a runtime setting");
  config_set->add_option("key", set_key, "allocation | flush-interval | rpm | seek-settle-ms | full-stroke-ms")->required();
  config_set->add_option("value", set_value, "New value")->required();

  // fill
  double fill_target = 0.0;
  std::uint64_t fill_seed = 1;
  std::string fill_request_size = "32K";
  std::string fill_pattern = "random";
  auto* fill_cmd = app.add_subcommand("fill", "Precondition with first writes up to a utilization");
  fill_cmd->add_option("--target", fill_target, "Target utilization in [0, 1]")->required();
  fill_cmd->add_option("--seed", fill_seed, "Random seed");
  fill_cmd->add_option("--request-size", fill_request_size, "Write size (default 32K)");
  fill_cmd->add_option("--pattern", fill_pattern, "random or sequential");

  // replay
  std::string trace_path, trace_format = "msr";
  std::uint64_t replay_limit = 0;
  auto* replay_cmd = app.add_subcommand("replay", "Replay an MSR-Cambridge trace (plain or .gz)");
  replay_cmd->add_option("trace", trace_path, "Trace file")->required();
  replay_cmd->add_option("--format", trace_format, "Trace format (msr)");
  replay_cmd->add_option("--limit", replay_limit, "Stop after N trace records");

  // stats
  std::string stats_format = "table";
  auto* stats_cmd = app.add_subcommand("stats", "Print counters, WA factor and latency totals");
  stats_cmd->add_option("--format", stats_format, "table, kv or json");

  // viz
  std::uint32_t viz_zone = 0;
  std::string viz_out, viz_svg, viz_trace, viz_pattern = "sequential";
  std::uint64_t viz_every = 1, viz_seed = 1;
  double viz_fill = -1.0;
  auto* viz_cmd = app.add_subcommand("viz", "Record per-request frames of one zone while running a workload");
  viz_cmd->add_option("--zone", viz_zone, "Zone to record")->required();
  viz_cmd->add_option("--out", viz_out, "Frame output (JSON lines)")->required();
  viz_cmd->add_option("--sample-every", viz_every, "Emit a frame every N requests");
  viz_cmd->add_option("--svg", viz_svg, "Also write the final zone state as SVG");
  auto* viz_fill_opt = viz_cmd->add_option("--fill", viz_fill, "Drive with a fill to this utilization");
  auto* viz_trace_opt = viz_cmd->add_option("--trace", viz_trace, "Drive with an MSR trace");
  viz_fill_opt->excludes(viz_trace_opt);
  viz_cmd->add_option("--pattern", viz_pattern, "Fill pattern: sequential or random");
  viz_cmd->add_option("--seed", viz_seed, "Fill seed");

  // experiment
  std::string exp_capacity = "1GiB", exp_utils = "0.55,0.6,0.65,0.7,0.75,0.8,0.85,0.9", exp_seeds = "1";
  std::uint64_t exp_requests = 20000;
  double exp_write_ratio = 0.7463;
  bool exp_no_cmr = false;
  auto* exp_cmd = app.add_subcommand("experiment", "WA/latency sweep over utilizations (CSV to stdout)");
  exp_cmd->add_option("--capacity", exp_capacity, "Device capacity per run");
  exp_cmd->add_option("--utilizations", exp_utils, "Comma-separated utilizations");
  exp_cmd->add_option("--seeds", exp_seeds, "Comma-separated seeds");
  exp_cmd->add_option("--requests", exp_requests, "Update-mix requests per point");
  exp_cmd->add_option("--write-ratio", exp_write_ratio, "Write fraction of the update mix");
  exp_cmd->add_flag("--no-cmr", exp_no_cmr, "Skip the CMR baseline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*create_cmd) {
      const DeviceConfig config = build_config(create, *create_cmd);
      auto session = Session::create(dir, config);
      session.commit();
      const auto g = session.device().geometry();
      std::cout << fmt::format("created {} {} device in {}: {} zones x {} blocks ({} bytes), checkpoint {}\n",
                               to_string(config.mode), to_string(config.strategy), dir, g.zone_count,
                               g.zone_capacity(), g.capacity_blocks() * g.block_size_bytes,
                               session.sequence());
    } else if (*config_cmd) {
      auto session = Session::open(dir);
      if (*config_show) {
        std::cout << to_json(session.device().config()).dump(2) << "\n";
      } else if (*config_set) {
        DeviceConfig next = session.device().config();
        apply_setting(next, set_key, set_value);
        session.device().reconfigure(next);
        session.commit();
        std::cout << fmt::format("{} = {}\n", set_key, set_value);
      }
    } else if (*fill_cmd) {
      auto session = Session::open(dir);
      WorkloadSpec spec;
      spec.kind = parse_pattern(fill_pattern);
      spec.request_size_bytes = parse_size(fill_request_size);
      spec.target_utilization = fill_target;
      spec.seed = fill_seed;
      const auto issued = run_fill(session, spec, [](const IoRequest&, const RequestResult&) {});
      session.commit();
      std::cout << fmt::format("issued {} write requests; utilization {:.4f}%\n", issued,
                               100.0 * session.device().utilization().fraction);
    } else if (*replay_cmd) {
      if (trace_format != "msr") fail(Errc::Usage, fmt::format("unsupported trace format '{}'", trace_format));
      auto session = Session::open(dir);
      const auto summary =
          replay_trace(session, trace_path, replay_limit, [](const IoRequest&, const RequestResult&) {});
      session.commit();
      std::cout << fmt::format("replayed {} records as {} requests ({} unknown op types skipped)\n",
                               summary.records, summary.requests, summary.skipped);
    } else if (*stats_cmd) {
      auto session = Session::open(dir);
      const Device& device = session.device();
      if (stats_format == "kv") std::cout << dump_stats_kv(device);
      else if (stats_format == "table") std::cout << dump_stats_table(device);
      else if (stats_format == "json") std::cout << dump_stats_json(device);
      else fail(Errc::Usage, fmt::format("unknown stats format '{}' (use table, kv or json)", stats_format));
    } else if (*viz_cmd) {
      if (viz_fill < 0.0 && viz_trace.empty()) fail(Errc::Usage, "viz needs --fill TARGET or --trace PATH");
      auto session = Session::open(dir);
      VizRecorder recorder(session.device(), viz_zone, viz_every);
      std::ofstream frames(viz_out, std::ios::binary | std::ios::trunc);
      if (!frames) fail(Errc::Io, fmt::format("cannot write {}", viz_out));
      std::uint64_t emitted = 0;
      auto sink = [&](const IoRequest& request, const RequestResult& result) {
        if (auto frame = recorder.observe(request, result.ops)) {
          frames << to_json_line(*frame) << '\n';
          ++emitted;
        }
      };
      if (!viz_trace.empty()) {
        replay_trace(session, viz_trace, 0, sink);
      } else {
        WorkloadSpec spec;
        spec.kind = parse_pattern(viz_pattern);
        spec.target_utilization = viz_fill;
        spec.seed = viz_seed;
        run_fill(session, spec, sink);
      }
      frames.flush();
      if (!frames) fail(Errc::Io, fmt::format("cannot write {}", viz_out));
      if (!viz_svg.empty()) write_text(viz_svg, recorder.render_svg());
      session.commit();
      std::cout << fmt::format("wrote {} frames of zone {} to {}\n", emitted, viz_zone, viz_out);
    } else if (*exp_cmd) {
      DeviceConfig base;
      base.capacity_bytes = parse_size(exp_capacity);
      base.validate();
      std::cout << experiment_csv_header() << "\n";
      for (double seed_value : parse_list(exp_seeds)) {
        for (double u : parse_list(exp_utils)) {
          UpdateMixSpec mix;
          mix.requests = exp_requests;
          mix.write_ratio = exp_write_ratio;
          mix.seed = static_cast<std::uint64_t>(seed_value);
          std::vector<DeviceConfig> configs;
          for (auto strategy : {AllocationStrategy::TwoStage, AllocationStrategy::ThreeStage}) {
            DeviceConfig c = base;
            c.strategy = strategy;
            configs.push_back(c);
          }
          if (!exp_no_cmr) {
            DeviceConfig c = base;
            c.mode = RecordingMode::Cmr;
            configs.push_back(c);
          }
          for (const auto& c : configs) std::cout << to_csv_row(run_point(c, u, mix)) << "\n" << std::flush;
        }
      }
    }
  } catch (const SimError& e) {
    std::cerr << "imrsim: " << e.what() << "\n";
    if (exit_code_for(e.code()) == kExitUsage) std::cerr << "run 'imrsim --help' for usage\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "imrsim: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
