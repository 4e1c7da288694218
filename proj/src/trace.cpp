#include "imrsim/trace.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <charconv>

#include <fmt/format.h>

#include "imrsim/errors.hpp"

namespace imrsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename Int>
Int parse_int(std::string_view field, std::string_view name, std::size_t line_number) {
  field = trim(field);
  Int value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    fail(Errc::Parse, fmt::format("line {}: {} '{}' is not a valid integer", line_number, name, field));
  }
  return value;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::optional<TraceRecord> parse_msr(std::string_view line, std::size_t line_number) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields.size() < 6 || fields.size() > 7) {
    fail(Errc::Parse, fmt::format("line {}: expected 6 or 7 comma-separated fields, got {}",
                                  line_number, fields.size()));
  }

  TraceRecord record;
  record.timestamp = parse_int<std::uint64_t>(fields[0], "timestamp", line_number);
  record.host = std::string(trim(fields[1]));
  record.disk_number = parse_int<std::int64_t>(fields[2], "disk number", line_number);
  record.offset_bytes = parse_int<std::uint64_t>(fields[4], "offset", line_number);
  record.size_bytes = parse_int<std::uint64_t>(fields[5], "size", line_number);
  if (record.size_bytes == 0) fail(Errc::Parse, fmt::format("line {}: zero-size request", line_number));
  if (fields.size() == 7 && !trim(fields[6]).empty()) {
    record.response_time = parse_int<std::uint64_t>(fields[6], "response time", line_number);
  }

  const std::string_view type = trim(fields[3]);
  if (type.empty()) fail(Errc::Parse, fmt::format("line {}: empty op type", line_number));
  if (iequals(type, "read")) {
    record.op_type = Direction::Read;
  } else if (iequals(type, "write")) {
    record.op_type = Direction::Write;
  } else {
    return std::nullopt;
  }
  return record;
}

std::string format_msr(const TraceRecord& r) {
  std::string line = fmt::format("{},{},{},{},{},{}", r.timestamp, r.host, r.disk_number,
                                 r.op_type == Direction::Read ? "Read" : "Write", r.offset_bytes,
                                 r.size_bytes);
  if (r.response_time) line += fmt::format(",{}", *r.response_time);
  return line;
}

std::vector<IoRequest> to_requests(const TraceRecord& record, std::uint32_t block_size,
                                   std::uint64_t capacity_blocks) {
  const std::uint64_t first = record.offset_bytes / block_size;
  // offset + size may exceed 2^64 only for absurd records; compute the end in blocks.
  const std::uint64_t end_bytes_in_first = record.offset_bytes % block_size + record.size_bytes;
  std::uint64_t remaining = (end_bytes_in_first + block_size - 1) / block_size;

  std::vector<IoRequest> out;
  std::uint64_t lba = first % capacity_blocks;
  while (remaining > 0) {
    const std::uint64_t room = capacity_blocks - lba;
    const std::uint64_t run = std::min<std::uint64_t>({remaining, room, 0xFFFFFFFFull});
    out.push_back({record.op_type, lba, static_cast<std::uint32_t>(run), std::nullopt});
    remaining -= run;
    lba = (lba + run) % capacity_blocks;
  }
  return out;
}

void TraceReader::GzCloser::operator()(void* handle) const {
  if (handle != nullptr) gzclose(static_cast<gzFile>(handle));
}

TraceReader::TraceReader(const std::filesystem::path& path) : path_(path) {
  // gzopen reads uncompressed files transparently.
  gzFile handle = gzopen(path.c_str(), "rb");
  if (handle == nullptr) fail(Errc::Io, fmt::format("cannot open trace {}", path.string()));
  file_.reset(handle);
}

TraceReader::~TraceReader() = default;

bool TraceReader::read_line(std::string& line) {
  line.clear();
  char buffer[4096];
  auto* handle = static_cast<gzFile>(file_.get());
  while (gzgets(handle, buffer, sizeof buffer) != nullptr) {
    line += buffer;
    if (!line.empty() && line.back() == '\n') return true;
  }
  int err = Z_OK;
  const char* message = gzerror(handle, &err);
  if (err != Z_OK && err != Z_STREAM_END) {
    fail(Errc::Io, fmt::format("{}: {}", path_.string(), message));
  }
  return !line.empty();
}

std::optional<TraceRecord> TraceReader::next() {
  std::string line;
  while (read_line(line)) {
    ++line_number_;
    if (trim(line).empty()) continue;
    if (auto record = parse_msr(trim(line), line_number_)) return record;
    ++skipped_;
  }
  return std::nullopt;
}

}  // namespace imrsim
