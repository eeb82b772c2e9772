#pragma once

#include <stdexcept>
#include <string>

namespace topicrank {

/// Failure categories surfaced by the toolkit. The CLI maps these to exit
/// codes and one-line stderr messages.
enum class error_kind {
  ingest,          // unreadable input file
  config,          // invalid configuration or degenerate corpus
  argument,        // bad call argument (e.g. m > V)
  parse,           // malformed serialized file
  method,          // method inapplicable (e.g. K=1 reranking)
  metric,          // metric undefined on the given inputs
  index,           // required statistic not tracked in the index
  generation,      // intrusion task pool empty
  internal,        // inconsistent internal state
};

inline const char* to_string(error_kind k) {
  switch (k) {
    case error_kind::ingest: return "ingest";
    case error_kind::config: return "config";
    case error_kind::argument: return "argument";
    case error_kind::parse: return "parse";
    case error_kind::method: return "method";
    case error_kind::metric: return "metric";
    case error_kind::index: return "index";
    case error_kind::generation: return "generation";
    case error_kind::internal: return "internal";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(error_kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  error_kind kind() const { return kind_; }

 private:
  error_kind kind_;
};

[[noreturn]] inline void fail(error_kind kind, const std::string& msg) {
  throw error(kind, msg);
}

}  // namespace topicrank
