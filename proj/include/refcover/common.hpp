#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace refcover {

// Base class for everything this library throws.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad flags, bad config, bad parameter combinations.  CLI exit code 1.
struct usage_error : error {
  using error::error;
};

// Unreadable or malformed input data.  CLI exit code 2.
struct data_error : error {
  using error::error;
};

// Malformed bracketed tree; carries the byte offset where parsing failed.
struct parse_error : data_error {
  parse_error(const std::string& msg, std::size_t offset)
      : data_error(msg + " at offset " + std::to_string(offset)),
        offset(offset) {}
  std::size_t offset;
};

// Timestamped diagnostics on stderr.
void log_info(const std::string& msg);
void log_warn(const std::string& msg);

}  // namespace refcover
