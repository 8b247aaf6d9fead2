#include "refcover/common.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace refcover {

namespace {

void log_line(const char* level, const std::string& msg) {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  std::fprintf(stderr, "[%s] %s %s\n", stamp, level, msg.c_str());
}

}  // namespace

void log_info(const std::string& msg) { log_line("INFO", msg); }
void log_warn(const std::string& msg) { log_line("WARN", msg); }

}  // namespace refcover
