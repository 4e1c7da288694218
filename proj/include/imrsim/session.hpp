#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "imrsim/checkpoint.hpp"
#include "imrsim/device.hpp"

namespace imrsim {

/// Exclusive advisory lock on `<dir>/LOCK`. Throws SimError(Busy) when another
/// process holds it.
class DeviceLock {
 public:
  explicit DeviceLock(const std::filesystem::path& dir);
  ~DeviceLock();
  DeviceLock(const DeviceLock&) = delete;
  DeviceLock& operator=(const DeviceLock&) = delete;

 private:
  int fd_ = -1;
};

/// A device opened from a checkpoint directory for one command.
///
/// Checkpoints are written every `flush_interval` host requests and on
/// commit(). A session destroyed without commit() removes the checkpoints it
/// wrote, leaving the directory at its prior sequence number.
class Session {
 public:
  /// Throws SimError(Busy) when the directory already holds a device.
  static Session create(const std::filesystem::path& dir, const DeviceConfig& config);
  /// Throws SimError(Io) when no device exists, SimError(RestoreFailed) when
  /// none of its checkpoints is valid.
  static Session open(const std::filesystem::path& dir);

  Session(Session&&) noexcept;
  ~Session();

  Device& device() { return *device_; }
  std::uint64_t sequence() const { return sequence_; }

  RequestResult submit(const IoRequest& request, std::span<const std::byte> payload = {});
  /// Writes a final checkpoint and keeps it.
  void commit();

 private:
  Session(const std::filesystem::path& dir, Device device, std::uint64_t sequence);
  void flush();

  std::unique_ptr<DeviceLock> lock_;
  CheckpointDir checkpoints_;
  std::optional<Device> device_;
  std::uint64_t sequence_ = 0;
  std::vector<std::uint64_t> written_;
  bool committed_ = false;
};

}  // namespace imrsim
