#pragma once

#include <stdexcept>
#include <string>

namespace gsamul {

enum class ErrorCode {
  invalid_input = 1,
  degenerate_state = 2,
  numerical_divergence = 3,
  io_error = 4,
  degenerate_input = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::invalid_input, what);
}

}  // namespace gsamul
