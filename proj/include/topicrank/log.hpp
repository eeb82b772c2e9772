#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace topicrank {

enum class log_level { quiet = 0, info = 1, debug = 2 };

namespace detail {
inline log_level parse_log_env() {
  const char* env = std::getenv("TOPICRANK_LOG");
  if (!env) return log_level::info;
  std::string v(env);
  if (v == "quiet") return log_level::quiet;
  if (v == "debug") return log_level::debug;
  return log_level::info;
}
inline log_level& level_ref() {
  static log_level lvl = parse_log_env();
  return lvl;
}
}  // namespace detail

inline log_level get_log_level() { return detail::level_ref(); }
inline void set_log_level(log_level lvl) { detail::level_ref() = lvl; }

/// Progress and diagnostics go to stderr; results go to stdout/files only.
template <typename... Args>
inline void log_info(const char* fmt, Args... args) {
  if (get_log_level() >= log_level::info) {
    std::fprintf(stderr, fmt, args...);
    std::fputc('\n', stderr);
  }
}

template <typename... Args>
inline void log_debug(const char* fmt, Args... args) {
  if (get_log_level() >= log_level::debug) {
    std::fprintf(stderr, fmt, args...);
    std::fputc('\n', stderr);
  }
}

inline bool debug_checks_enabled() { return get_log_level() >= log_level::debug; }

}  // namespace topicrank
