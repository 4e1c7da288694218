#include "imrsim/session.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include <fmt/format.h>

#include "imrsim/errors.hpp"

namespace imrsim {

namespace {

constexpr std::size_t kKeepCheckpoints = 3;

}  // namespace

DeviceLock::DeviceLock(const std::filesystem::path& dir) {
  const auto path = dir / "LOCK";
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) fail(Errc::Io, fmt::format("cannot open {}: {}", path.string(), std::strerror(errno)));
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    fail(Errc::Busy, fmt::format("device {} is in use by another process", dir.string()));
  }
}

DeviceLock::~DeviceLock() {
  if (fd_ >= 0) ::close(fd_);
}

Session::Session(const std::filesystem::path& dir, Device device, std::uint64_t sequence)
    : checkpoints_(dir), device_(std::move(device)), sequence_(sequence) {}

Session::Session(Session&& other) noexcept
    : lock_(std::move(other.lock_)),
      checkpoints_(std::move(other.checkpoints_)),
      device_(std::move(other.device_)),
      sequence_(other.sequence_),
      written_(std::move(other.written_)),
      committed_(other.committed_) {
  other.committed_ = true;
}

Session Session::create(const std::filesystem::path& dir, const DeviceConfig& config) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(Errc::Io, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  auto lock = std::make_unique<DeviceLock>(dir);
  if (!CheckpointDir(dir).sequences().empty()) {
    fail(Errc::Busy, fmt::format("a device already exists in {}", dir.string()));
  }
  Session session(dir, Device(config), 0);
  session.lock_ = std::move(lock);
  return session;
}

Session Session::open(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    fail(Errc::Io, fmt::format("no device at {} (run 'imrsim create' first)", dir.string()));
  }
  auto lock = std::make_unique<DeviceLock>(dir);
  auto restored = CheckpointDir(dir).load_latest();
  if (!restored) fail(Errc::Io, fmt::format("no device at {} (run 'imrsim create' first)", dir.string()));
  Session session(dir, std::move(restored->device), restored->sequence);
  session.lock_ = std::move(lock);
  return session;
}

Session::~Session() {
  if (committed_) return;
  for (auto seq : written_) checkpoints_.remove(seq);
}

void Session::flush() {
  sequence_ = checkpoints_.write(*device_);
  written_.push_back(sequence_);
}

RequestResult Session::submit(const IoRequest& request, std::span<const std::byte> payload) {
  auto result = device_->handle_request(request, payload);
  const SimStats& s = device_->stats();
  if ((s.read_requests + s.write_requests) % device_->config().flush_interval == 0) flush();
  return result;
}

void Session::commit() {
  flush();
  committed_ = true;
  checkpoints_.prune(kKeepCheckpoints);
}

}  // namespace imrsim
