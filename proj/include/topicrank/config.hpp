#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "topicrank/corpus.hpp"
#include "topicrank/errors.hpp"
#include "topicrank/eval.hpp"
#include "topicrank/io_util.hpp"
#include "topicrank/lda.hpp"
#include "topicrank/rerank.hpp"

namespace topicrank {

/// One experiment, end to end: ingest -> train -> rank -> evaluate.
/// Parsed from a flat key=value config file (UTF-8, `#` comments):
///
///   corpus    = path            (repeatable, at least one)
///   stopwords = path            (optional)
///   min_count = 1
///   topics    = 10              (required)
///   alpha     = 5.0             (default 50/topics)
///   beta      = 0.01
///   iters     = 500
///   seed      = 1
///   top_m     = 10
///   methods   = norm,sdw,sdwts,chi
///   patterns  = s_voc,s_topic,s_self
///   repeats   = 10
///   epsilon   = 1.0
///   out       = directory       (required)
struct ExperimentConfig {
  std::vector<std::string> corpus_paths;
  std::string stopword_path;  // empty = none
  std::int64_t min_count = 1;
  LdaConfig lda;
  word_id top_m = 10;
  std::vector<rank_method> methods = {rank_method::norm, rank_method::sdw, rank_method::sdwts,
                                      rank_method::chi};
  std::vector<intrusion_pattern> patterns = {intrusion_pattern::s_voc, intrusion_pattern::s_topic,
                                             intrusion_pattern::s_self};
  std::int32_t repeats = 10;
  double epsilon = 1.0;
  std::string out_dir;

  void validate() const {
    if (corpus_paths.empty()) fail(error_kind::config, "config: at least one `corpus` is required");
    for (const auto& p : corpus_paths) {
      if (!std::filesystem::exists(p))
        fail(error_kind::ingest, "config: corpus file does not exist: " + p);
    }
    if (!stopword_path.empty() && !std::filesystem::exists(stopword_path))
      fail(error_kind::ingest, "config: stopword file does not exist: " + stopword_path);
    if (min_count < 1) fail(error_kind::config, "config: min_count must be >= 1");
    lda.validate();
    if (top_m < 1) fail(error_kind::config, "config: top_m must be >= 1");
    if (methods.empty()) fail(error_kind::config, "config: methods must not be empty");
    if (repeats < 1) fail(error_kind::config, "config: repeats must be >= 1");
    if (!(epsilon > 0.0)) fail(error_kind::config, "config: epsilon must be > 0");
    if (out_dir.empty()) fail(error_kind::config, "config: `out` directory is required");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    std::string item = trim(s.substr(start, comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = comma + 1;
  }
  return out;
}

template <typename T, typename Parse>
inline std::vector<T> parse_unique_list(const std::string& value, const char* key, Parse parse) {
  std::vector<T> out;
  std::set<std::string> seen;
  for (const auto& item : split_csv(value)) {
    if (!seen.insert(item).second)
      fail(error_kind::config, std::string("config: duplicate ") + key + " entry '" + item + "'");
    out.push_back(parse(item));
  }
  if (out.empty())
    fail(error_kind::config, std::string("config: `") + key + "` must list at least one value");
  return out;
}

}  // namespace detail

inline std::vector<rank_method> parse_method_list(const std::string& value) {
  return detail::parse_unique_list<rank_method>(value, "methods", parse_rank_method);
}

inline std::vector<intrusion_pattern> parse_pattern_list(const std::string& value) {
  return detail::parse_unique_list<intrusion_pattern>(value, "patterns",
                                                      parse_intrusion_pattern);
}

/// Parses and validates a config file. Unknown or repeated keys (other
/// than `corpus`) are errors, so typos never pass silently.
inline ExperimentConfig parse_experiment_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(error_kind::ingest, "cannot open config file: " + path);

  ExperimentConfig config;
  config.lda.K = 0;
  bool alpha_set = false, beta_set = false, iters_set = false, seed_set = false;
  std::set<std::string> seen;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(error_kind::parse,
           path + ":" + std::to_string(lineno) + ": expected `key = value`, got '" + line + "'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      fail(error_kind::parse, path + ":" + std::to_string(lineno) + ": empty key or value");
    if (key != "corpus" && !seen.insert(key).second)
      fail(error_kind::parse, path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");

    if (key == "corpus") {
      config.corpus_paths.push_back(value);
    } else if (key == "stopwords") {
      config.stopword_path = value;
    } else if (key == "min_count") {
      config.min_count = parse_int(value, "min_count");
    } else if (key == "topics") {
      config.lda.K = static_cast<topic_id>(parse_int(value, "topics"));
    } else if (key == "alpha") {
      config.lda.alpha = parse_double(value, "alpha");
      alpha_set = true;
    } else if (key == "beta") {
      config.lda.beta = parse_double(value, "beta");
      beta_set = true;
    } else if (key == "iters") {
      config.lda.n_iters = static_cast<std::int32_t>(parse_int(value, "iters"));
      iters_set = true;
    } else if (key == "seed") {
      config.lda.seed = static_cast<std::uint64_t>(parse_int(value, "seed"));
      seed_set = true;
    } else if (key == "top_m") {
      config.top_m = static_cast<word_id>(parse_int(value, "top_m"));
    } else if (key == "methods") {
      config.methods = parse_method_list(value);
    } else if (key == "patterns") {
      config.patterns = parse_pattern_list(value);
    } else if (key == "repeats") {
      config.repeats = static_cast<std::int32_t>(parse_int(value, "repeats"));
    } else if (key == "epsilon") {
      config.epsilon = parse_double(value, "epsilon");
    } else if (key == "out") {
      config.out_dir = value;
    } else {
      fail(error_kind::parse,
           path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }

  if (config.lda.K < 1) fail(error_kind::config, path + ": `topics` is required");
  LdaConfig defaults = LdaConfig::defaults(config.lda.K, 1);
  if (!alpha_set) config.lda.alpha = defaults.alpha;
  if (!beta_set) config.lda.beta = defaults.beta;
  if (!iters_set) config.lda.n_iters = defaults.n_iters;
  if (!seed_set) config.lda.seed = defaults.seed;
  config.validate();
  return config;
}

}  // namespace topicrank
