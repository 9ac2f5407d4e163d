#pragma once

#include <stdexcept>
#include <string>

namespace ndof {

enum class ErrorCode {
  InvalidArgument = 1,
  KindMismatch = 2,
  DecompositionFailure = 3,
  UndefinedRatio = 4,
  NoChannel = 5,
  RankDeficiency = 6,
  Io = 7,
  MalformedFile = 8,
  DimensionMismatch = 9,
  NotPositiveDefinite = 10,
};

// All library failures surface as ndof::Error; the code is stable and maps
// one-to-one onto the C API status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace ndof
