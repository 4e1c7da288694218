#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace imrsim {

enum class Errc {
  AddressIllegal,
  InvalidTriple,
  Logic,
  ZoneFull,
  NoData,
  RestoreFailed,
  Parse,
  Config,
  Usage,
  Io,
  Busy,
};

std::string_view to_string(Errc code);

class SimError : public std::runtime_error {
 public:
  SimError(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace imrsim
