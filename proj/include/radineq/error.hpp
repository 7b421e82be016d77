#pragma once

#include <stdexcept>
#include <string>

namespace radineq {

enum class ErrorCode {
  invalid_argument = 1,  // malformed input: NaN, size mismatch, bad ranges
  domain = 2,            // input outside the operator's mathematical domain
  numerical = 3,         // truncation-dominated or non-finite result
};

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

}  // namespace radineq
