#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imrsim/physical_op.hpp"

namespace imrsim {

/// One line of an MSR-Cambridge block trace:
///   Timestamp,Hostname,DiskNumber,Type,Offset,Size[,ResponseTime]
struct TraceRecord {
  std::uint64_t timestamp = 0;
  std::string host;
  std::int64_t disk_number = 0;
  Direction op_type = Direction::Read;
  std::uint64_t offset_bytes = 0;
  std::uint64_t size_bytes = 0;
  std::optional<std::uint64_t> response_time;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// Parses one MSR line. Returns nullopt when the Type field is neither read
/// nor write (callers skip and count those). Throws SimError(Parse) naming
/// `line_number` for anything malformed.
std::optional<TraceRecord> parse_msr(std::string_view line, std::size_t line_number = 0);

std::string format_msr(const TraceRecord& record);

/// Block requests covering the record's byte range. The start is aligned down
/// and the end rounded up to `block_size`; the start block wraps modulo the
/// capacity and a run crossing the end of the device is split there.
std::vector<IoRequest> to_requests(const TraceRecord& record, std::uint32_t block_size,
                                   std::uint64_t capacity_blocks);

/// Streams records from a plain or gzip-compressed MSR file.
class TraceReader {
 public:
  explicit TraceReader(const std::filesystem::path& path);
  ~TraceReader();
  TraceReader(const TraceReader&) = delete;
  TraceReader& operator=(const TraceReader&) = delete;

  /// Next read/write record; blank lines and unknown op types are skipped.
  std::optional<TraceRecord> next();

  std::size_t line_number() const { return line_number_; }
  std::size_t skipped_unknown() const { return skipped_; }

 private:
  bool read_line(std::string& line);

  struct GzCloser {
    void operator()(void* handle) const;
  };
  std::unique_ptr<void, GzCloser> file_;
  std::filesystem::path path_;
  std::size_t line_number_ = 0;
  std::size_t skipped_ = 0;
};

}  // namespace imrsim
