#pragma once

#include <stdexcept>
#include <string>

namespace bsecg {

enum class ErrorCode {
  InvalidArgument = 1,
  Dimension,
  OutOfRange,
  Io,
  Format,
  Numeric,
};

/// Exception carried through the C++ core; the C API maps `code()` onto
/// the corresponding `bsecg_status` value.
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

}  // namespace bsecg
