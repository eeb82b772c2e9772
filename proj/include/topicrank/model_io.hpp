#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "topicrank/corpus.hpp"
#include "topicrank/errors.hpp"
#include "topicrank/io_util.hpp"
#include "topicrank/lda.hpp"

namespace topicrank {

/// Model file layout (UTF-8 text):
///   header line:  K V D alpha beta seed rng_name iter_done
///   K lines:      sparse `v:count` pairs per topic (N_kv, ascending v)
///   D lines:      sparse `k:count` pairs per document (N_dk, ascending k)
///   D lines:      space-separated topic ids (z), one line per document
///   final line:   `rng_state` followed by the serialized generator
/// N_k is rebuilt from N_kv on load and cross-checked against N_dk and z.
inline void save_model(const GibbsState& state, const LdaConfig& config, std::ostream& os) {
  os << state.K << ' ' << state.V << ' ' << state.z.size() << ' '
     << fmt_double(config.alpha) << ' ' << fmt_double(config.beta) << ' ' << config.seed << ' '
     << rng::algorithm_name << ' ' << state.iter_done << '\n';
  for (topic_id k = 0; k < state.K; ++k) {
    bool first = true;
    for (word_id v = 0; v < state.V; ++v) {
      std::int32_t c = state.n_kv(k, v);
      if (c == 0) continue;
      if (!first) os.put(' ');
      os << v << ':' << c;
      first = false;
    }
    os.put('\n');
  }
  for (std::size_t d = 0; d < state.z.size(); ++d) {
    bool first = true;
    for (topic_id k = 0; k < state.K; ++k) {
      std::int32_t c = state.n_dk(d, k);
      if (c == 0) continue;
      if (!first) os.put(' ');
      os << k << ':' << c;
      first = false;
    }
    os.put('\n');
  }
  for (const auto& zd : state.z) {
    for (std::size_t n = 0; n < zd.size(); ++n) {
      if (n) os.put(' ');
      os << zd[n];
    }
    os.put('\n');
  }
  os << "rng_state " << state.gen.serialize() << '\n';
}

inline void save_model(const GibbsState& state, const LdaConfig& config, const std::string& path) {
  atomic_write(path, [&](std::ostream& os) { save_model(state, config, os); });
}

namespace detail {

inline std::pair<std::int64_t, std::int64_t> parse_sparse_pair(const std::string& tok,
                                                               const std::string& where) {
  std::size_t colon = tok.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= tok.size())
    fail(error_kind::parse, where + ": expected `id:count`, got '" + tok + "'");
  return {parse_int(tok.substr(0, colon), where + " id"),
          parse_int(tok.substr(colon + 1), where + " count")};
}

}  // namespace detail

/// Loads a model and verifies it against the corpus it was trained on.
inline std::pair<GibbsState, LdaConfig> load_model(const std::string& path,
                                                   const Corpus& corpus) {
  std::ifstream is(path);
  if (!is) fail(error_kind::ingest, "cannot open model file: " + path);
  std::string line;
  std::int64_t lineno = 0;
  auto next_line = [&](const char* section) -> std::string& {
    if (!std::getline(is, line))
      fail(error_kind::parse, path + ": truncated file, missing " + std::string(section) +
                                  " section (after line " + std::to_string(lineno) + ")");
    ++lineno;
    return line;
  };

  auto header = split_ws(next_line("header"));
  if (header.size() != 8)
    fail(error_kind::parse, path + ":1: header must be 'K V D alpha beta seed rng_name iter_done'");
  LdaConfig config;
  config.K = static_cast<topic_id>(parse_int(header[0], "K"));
  word_id V = static_cast<word_id>(parse_int(header[1], "V"));
  std::int64_t D = parse_int(header[2], "D");
  config.alpha = parse_double(header[3], "alpha");
  config.beta = parse_double(header[4], "beta");
  config.seed = static_cast<std::uint64_t>(parse_int(header[5], "seed"));
  if (header[6] != rng::algorithm_name)
    fail(error_kind::parse, path + ":1: unsupported rng '" + header[6] + "', this build uses " +
                                rng::algorithm_name);
  std::int32_t iter_done = static_cast<std::int32_t>(parse_int(header[7], "iter_done"));
  if (V != corpus.vocab_size())
    fail(error_kind::parse, path + ": model V=" + std::to_string(V) + " but corpus has V=" +
                                std::to_string(corpus.vocab_size()));
  if (D != corpus.n_docs())
    fail(error_kind::parse, path + ": model D=" + std::to_string(D) + " but corpus has D=" +
                                std::to_string(corpus.n_docs()));

  GibbsState state;
  state.K = config.K;
  state.V = V;
  state.iter_done = iter_done;
  state.word_topic.assign(static_cast<std::size_t>(V) * config.K, 0);
  state.doc_topic.assign(static_cast<std::size_t>(D) * config.K, 0);
  state.topic_total.assign(static_cast<std::size_t>(config.K), 0);

  for (topic_id k = 0; k < config.K; ++k) {
    auto toks = split_ws(next_line("topic-word counts"));
    for (const auto& tok : toks) {
      auto [v, c] = detail::parse_sparse_pair(tok, path + ":" + std::to_string(lineno));
      if (v < 0 || v >= V)
        fail(error_kind::parse, path + ":" + std::to_string(lineno) + ": word id out of range");
      state.word_topic[static_cast<std::size_t>(v) * config.K + static_cast<std::size_t>(k)] =
          static_cast<std::int32_t>(c);
      state.topic_total[static_cast<std::size_t>(k)] += c;
      state.n_tokens += c;
    }
  }
  for (std::int64_t d = 0; d < D; ++d) {
    auto toks = split_ws(next_line("document-topic counts"));
    for (const auto& tok : toks) {
      auto [k, c] = detail::parse_sparse_pair(tok, path + ":" + std::to_string(lineno));
      if (k < 0 || k >= config.K)
        fail(error_kind::parse, path + ":" + std::to_string(lineno) + ": topic id out of range");
      state.doc_topic[static_cast<std::size_t>(d) * config.K + static_cast<std::size_t>(k)] =
          static_cast<std::int32_t>(c);
    }
  }
  state.z.resize(static_cast<std::size_t>(D));
  for (std::int64_t d = 0; d < D; ++d) {
    auto toks = split_ws(next_line("topic assignments"));
    auto& zd = state.z[static_cast<std::size_t>(d)];
    zd.reserve(toks.size());
    for (const auto& tok : toks) {
      std::int64_t k = parse_int(tok, "topic assignment");
      if (k < 0 || k >= config.K)
        fail(error_kind::parse, path + ":" + std::to_string(lineno) + ": topic id out of range");
      zd.push_back(static_cast<topic_id>(k));
    }
  }
  {
    auto& rl = next_line("rng_state");
    std::istringstream rs(rl);
    std::string tag;
    rs >> tag;
    if (tag != "rng_state")
      fail(error_kind::parse, path + ":" + std::to_string(lineno) + ": expected rng_state section");
    std::string rest;
    std::getline(rs, rest);
    state.gen.deserialize(rest);
  }

  validate_state(state, corpus);
  detail::refresh_inv_norm(state, static_cast<double>(V) * config.beta);
  // n_iters in the returned config reflects sweeps already run; callers
  // that resume training choose their own additional sweep count.
  config.n_iters = iter_done > 0 ? iter_done : 1;
  config.burn_in = 0;
  return {std::move(state), config};
}

}  // namespace topicrank
