#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cesm {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  ZeroColumn,
  RankDeficient,
  AlphaTooSmall,
  DegenerateProblem,
  ManifestMissing,
  MalformedMatrix,
  NotConverged,
  Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace cesm
