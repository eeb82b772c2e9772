#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "topicrank/errors.hpp"

namespace topicrank {

/// Round-trip-exact text form of a double (shortest form would also work,
/// max_digits10 keeps it simple and portable).
inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Fixed-width form used in result files; stable across reruns because the
/// underlying bits are.
inline std::string fmt_score(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) fail(error_kind::parse, what + ": trailing junk in '" + s + "'");
    return v;
  } catch (const error&) {
    throw;
  } catch (const std::exception&) {
    fail(error_kind::parse, what + ": not a number: '" + s + "'");
  }
}

inline long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) fail(error_kind::parse, what + ": trailing junk in '" + s + "'");
    return v;
  } catch (const error&) {
    throw;
  } catch (const std::exception&) {
    fail(error_kind::parse, what + ": not an integer: '" + s + "'");
  }
}

/// Writes via a temp file in the same directory, then renames, so an
/// interrupted run never leaves a partial file at the target path.
inline void atomic_write(const std::string& path,
                         const std::function<void(std::ostream&)>& emit) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) fail(error_kind::ingest, "cannot open for write: " + tmp.string());
    emit(os);
    os.flush();
    if (!os) fail(error_kind::ingest, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) fail(error_kind::ingest, "rename failed: " + target.string() + ": " + ec.message());
}

inline std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(error_kind::ingest, "cannot open: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace topicrank
