#include <gtest/gtest.h>

#include <zlib.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "imrsim/trace.hpp"
#include "test_support.hpp"

namespace imrsim {
namespace {

namespace fs = std::filesystem;
using testing::error_of;

fs::path temp_file(const std::string& name) {
  std::random_device rd;
  return fs::temp_directory_path() / (std::to_string(rd()) + "-" + name);
}

TEST(Trace, ParseExamples) {
  const auto r = parse_msr("128166372003061629,web,0,Write,107520,24576,12345", 1);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->timestamp, 128166372003061629u);
  EXPECT_EQ(r->host, "web");
  EXPECT_EQ(r->disk_number, 0);
  EXPECT_EQ(r->op_type, Direction::Write);
  EXPECT_EQ(r->offset_bytes, 107520u);
  EXPECT_EQ(r->size_bytes, 24576u);
  EXPECT_EQ(r->response_time, 12345u);

  const auto read = parse_msr("1,hm,1,read,0,4096", 2);
  ASSERT_TRUE(read);
  EXPECT_EQ(read->op_type, Direction::Read);
  EXPECT_FALSE(read->response_time);
}

TEST(Trace, MalformedLinesNameTheLine) {
  try {
    parse_msr("not,a,trace", 42);
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), Errc::Parse);
    EXPECT_NE(std::string(e.what()).find("42"), std::string::npos);
  }
  EXPECT_EQ(error_of([] { parse_msr("1,h,0,Write,abc,4096", 1); }), Errc::Parse);
  EXPECT_EQ(error_of([] { parse_msr("1,h,0,Write,0,0", 1); }), Errc::Parse);
  EXPECT_EQ(error_of([] { parse_msr("1,h,0,Write,0,4096,1,2", 1); }), Errc::Parse);
}

TEST(Trace, UnknownTypeIsSkipped) {
  EXPECT_FALSE(parse_msr("1,h,0,Flush,0,4096", 1));
}

TEST(Trace, ToRequestsExamples) {
  TraceRecord r;
  r.op_type = Direction::Write;
  r.offset_bytes = 107520;
  r.size_bytes = 24576;
  EXPECT_EQ(to_requests(r, 4096, 1 << 20),
            (std::vector<IoRequest>{{Direction::Write, 26, 7, std::nullopt}}));

  r.offset_bytes = 0;
  r.size_bytes = 4096;
  EXPECT_EQ(to_requests(r, 4096, 100), (std::vector<IoRequest>{{Direction::Write, 0, 1, std::nullopt}}));

  r.offset_bytes = 98ull * 4096;
  r.size_bytes = 4 * 4096;
  EXPECT_EQ(to_requests(r, 4096, 100), (std::vector<IoRequest>{{Direction::Write, 98, 2, std::nullopt},
                                                                {Direction::Write, 0, 2, std::nullopt}}));

  r.offset_bytes = 250ull * 4096;
  r.size_bytes = 4096;
  EXPECT_EQ(to_requests(r, 4096, 100), (std::vector<IoRequest>{{Direction::Write, 50, 1, std::nullopt}}));
}

// Oracle: the set of blocks touched by [offset, offset + size), modulo capacity.
TEST(Trace, RequestsCoverExactlyTheTouchedBlocks) {
  std::mt19937_64 rng(31);
  const std::uint64_t capacity = 1000;
  std::uniform_int_distribution<std::uint64_t> offset(0, 3 * capacity * 4096);
  std::uniform_int_distribution<std::uint64_t> size(1, 64 * 4096);
  for (int i = 0; i < 5000; ++i) {
    TraceRecord r;
    r.offset_bytes = offset(rng);
    r.size_bytes = size(rng);
    std::vector<int> expected(capacity, 0);
    for (std::uint64_t b = r.offset_bytes / 4096; b <= (r.offset_bytes + r.size_bytes - 1) / 4096; ++b) {
      ++expected[b % capacity];
    }
    std::vector<int> got(capacity, 0);
    for (const auto& q : to_requests(r, 4096, capacity)) {
      ASSERT_GE(q.length, 1u);
      ASSERT_LE(q.lba + q.length, capacity);
      for (std::uint64_t b = q.lba; b < q.lba + q.length; ++b) ++got[b];
    }
    ASSERT_EQ(got, expected) << r.offset_bytes << " " << r.size_bytes;
  }
}

TEST(Trace, FormatParseRoundTrip) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    TraceRecord r;
    r.timestamp = rng();
    r.host = i % 2 ? "src1" : "prxy";
    r.disk_number = static_cast<std::int64_t>(rng() % 8);
    r.op_type = i % 3 ? Direction::Write : Direction::Read;
    r.offset_bytes = rng() >> 8;
    r.size_bytes = 1 + rng() % 100000;
    if (i % 5) r.response_time = rng() % 100000;
    EXPECT_EQ(parse_msr(format_msr(r), 1), r);
  }
}

TEST(Trace, ReaderHandlesPlainAndGzip) {
  const std::string body =
      "1,h,0,Write,0,4096,10\n"
      "\n"
      "2,h,0,Flush,0,4096,10\n"
      "3,h,0,Read,8192,8192\n";
  const auto plain = temp_file("t.csv");
  std::ofstream(plain) << body;
  const auto gz = temp_file("t.csv.gz");
  gzFile out = gzopen(gz.c_str(), "wb");
  gzwrite(out, body.data(), static_cast<unsigned>(body.size()));
  gzclose(out);

  for (const auto& path : {plain, gz}) {
    TraceReader reader(path);
    std::vector<TraceRecord> records;
    while (auto r = reader.next()) records.push_back(*r);
    ASSERT_EQ(records.size(), 2u) << path;
    EXPECT_EQ(records[1].offset_bytes, 8192u);
    EXPECT_EQ(reader.skipped_unknown(), 1u);
    EXPECT_EQ(reader.line_number(), 4u);
  }
  fs::remove(plain);
  fs::remove(gz);
  EXPECT_EQ(error_of([] { TraceReader reader("/nonexistent/trace.csv"); }), Errc::Io);
}

TEST(Trace, ReaderReportsBadLineNumber) {
  const auto plain = temp_file("bad.csv");
  std::ofstream(plain) << "1,h,0,Write,0,4096\nnot,a,trace\n";
  TraceReader reader(plain);
  EXPECT_TRUE(reader.next());
  try {
    reader.next();
    ADD_FAILURE();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), Errc::Parse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  fs::remove(plain);
}

}  // namespace
}  // namespace imrsim
