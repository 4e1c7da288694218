#include "imrsim/errors.hpp"

namespace imrsim {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::AddressIllegal: return "address-illegal";
    case Errc::InvalidTriple: return "invalid-triple";
    case Errc::Logic: return "logic";
    case Errc::ZoneFull: return "zone-full";
    case Errc::NoData: return "no-data";
    case Errc::RestoreFailed: return "restore-failed";
    case Errc::Parse: return "parse";
    case Errc::Config: return "config";
    case Errc::Usage: return "usage";
    case Errc::Io: return "io";
    case Errc::Busy: return "busy";
  }
  return "unknown";
}

SimError::SimError(Errc code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

void fail(Errc code, const std::string& what) { throw SimError(code, what); }

}  // namespace imrsim
