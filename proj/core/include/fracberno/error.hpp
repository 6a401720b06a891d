#pragma once

#include <stdexcept>
#include <string>

namespace fracberno {

/// Failure raised by any library routine. `code` is a short stable token
/// (e.g. "grid too large", "center-outside") that callers and tests match on.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(detail.empty() ? code : code + ": " + detail),
        code_(std::move(code)) {}
  explicit Error(std::string code) : Error(std::move(code), "") {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace fracberno
