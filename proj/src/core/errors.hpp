#pragma once

#include <stdexcept>
#include <string>

namespace sptd {

enum class ErrorCode {
  validation = 1,
  alignment = 2,
  domain = 3,
  ingest = 4,
  numeric = 5,
  io = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

  static Error validation(const std::string& what) { return {ErrorCode::validation, what}; }
  static Error alignment(const std::string& what) { return {ErrorCode::alignment, what}; }
  static Error domain(const std::string& what) { return {ErrorCode::domain, what}; }
  static Error ingest(const std::string& what) { return {ErrorCode::ingest, what}; }
  static Error numeric(const std::string& what) { return {ErrorCode::numeric, what}; }
  static Error io(const std::string& what) { return {ErrorCode::io, what}; }

 private:
  ErrorCode code_;
};

}  // namespace sptd
