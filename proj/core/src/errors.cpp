#include "cesm/errors.hpp"

namespace cesm {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroColumn: return "ZeroColumn";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::AlphaTooSmall: return "AlphaTooSmall";
    case ErrorKind::DegenerateProblem: return "DegenerateProblem";
    case ErrorKind::ManifestMissing: return "ManifestMissing";
    case ErrorKind::MalformedMatrix: return "MalformedMatrix";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace cesm
