#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "topicrank/corpus.hpp"
#include "topicrank/errors.hpp"
#include "topicrank/log.hpp"
#include "topicrank/rng.hpp"

namespace topicrank {

using topic_id = std::int32_t;

struct LdaConfig {
  topic_id K = 0;
  double alpha = 0.0;        // symmetric document-topic prior
  double beta = 0.0;         // symmetric topic-word prior
  std::int32_t n_iters = 0;  // full sweeps to run
  std::int32_t burn_in = 0;  // reserved; point estimates use the final sample
  std::uint64_t seed = 0;

  static LdaConfig defaults(topic_id K, std::uint64_t seed = 1) {
    LdaConfig cfg;
    cfg.K = K;
    cfg.alpha = 50.0 / static_cast<double>(K);
    cfg.beta = 0.01;
    cfg.n_iters = 500;
    cfg.burn_in = 0;
    cfg.seed = seed;
    return cfg;
  }

  void validate() const {
    if (K < 1) fail(error_kind::config, "K must be >= 1");
    if (!(alpha > 0.0)) fail(error_kind::config, "alpha must be > 0");
    if (!(beta > 0.0)) fail(error_kind::config, "beta must be > 0");
    if (n_iters < 1) fail(error_kind::config, "n_iters must be >= 1");
    if (burn_in < 0 || burn_in >= n_iters)
      fail(error_kind::config, "burn_in must satisfy 0 <= burn_in < n_iters");
  }
};

/// Immutable snapshot of the count statistics a trained sampler exposes to
/// scoring. topic_word is K x V row-major.
struct TopicCounts {
  topic_id K = 0;
  word_id V = 0;
  std::vector<std::int32_t> topic_word;   // N_kv, [k*V + v]
  std::vector<std::int64_t> topic_total;  // N_k
  std::vector<std::int64_t> word_total;   // N_v
  std::int64_t total = 0;                 // N

  std::int32_t n_kv(topic_id k, word_id v) const {
    return topic_word[static_cast<std::size_t>(k) * V + static_cast<std::size_t>(v)];
  }
};

enum class score_kind { phi, sdw, sdwts, chi };

inline const char* to_string(score_kind k) {
  switch (k) {
    case score_kind::phi: return "phi";
    case score_kind::sdw: return "sdw";
    case score_kind::sdwts: return "sdwts";
    case score_kind::chi: return "chi";
  }
  return "?";
}

/// K x V score matrix plus the count snapshot it was derived from (the
/// tie-break rule for ranked lists needs the raw counts).
struct TopicWordMatrix {
  score_kind kind = score_kind::phi;
  topic_id K = 0;
  word_id V = 0;
  std::vector<double> scores;  // [k*V + v]
  std::shared_ptr<const TopicCounts> counts;

  double at(topic_id k, word_id v) const {
    return scores[static_cast<std::size_t>(k) * V + static_cast<std::size_t>(v)];
  }
};

/// Mutable sampler state: per-token assignments and the count arrays kept
/// in sync with them. A single chain is single-threaded; independent
/// chains with different seeds may run concurrently.
struct GibbsState {
  topic_id K = 0;
  word_id V = 0;
  std::int64_t n_tokens = 0;
  std::int32_t iter_done = 0;

  std::vector<std::vector<topic_id>> z;    // aligned with Corpus.docs
  std::vector<std::int32_t> word_topic;    // N_kv stored word-major: [v*K + k]
  std::vector<std::int32_t> doc_topic;     // N_dk, [d*K + k]
  std::vector<std::int32_t> topic_total;   // N_k
  std::vector<double> inv_topic_norm;      // 1 / (N_k + V*beta), kept current
  rng gen;

  std::int32_t n_kv(topic_id k, word_id v) const {
    return word_topic[static_cast<std::size_t>(v) * K + static_cast<std::size_t>(k)];
  }
  std::int32_t n_dk(std::size_t d, topic_id k) const {
    return doc_topic[d * K + static_cast<std::size_t>(k)];
  }
  std::int32_t n_k(topic_id k) const { return topic_total[static_cast<std::size_t>(k)]; }

  TopicCounts snapshot() const {
    TopicCounts c;
    c.K = K;
    c.V = V;
    c.topic_word.assign(static_cast<std::size_t>(K) * V, 0);
    for (word_id v = 0; v < V; ++v)
      for (topic_id k = 0; k < K; ++k)
        c.topic_word[static_cast<std::size_t>(k) * V + v] = n_kv(k, v);
    c.topic_total.assign(topic_total.begin(), topic_total.end());
    c.word_total.assign(static_cast<std::size_t>(V), 0);
    for (topic_id k = 0; k < K; ++k)
      for (word_id v = 0; v < V; ++v)
        c.word_total[static_cast<std::size_t>(v)] += n_kv(k, v);
    c.total = n_tokens;
    return c;
  }
};

namespace detail {

inline void refresh_inv_norm(GibbsState& state, double v_beta) {
  state.inv_topic_norm.resize(static_cast<std::size_t>(state.K));
  for (topic_id k = 0; k < state.K; ++k)
    state.inv_topic_norm[static_cast<std::size_t>(k)] =
        1.0 / (state.topic_total[static_cast<std::size_t>(k)] + v_beta);
}

}  // namespace detail

/// Rebuilds every count array from z and compares; throws on any mismatch.
/// This is the exact-recount check behind the state invariants.
inline void validate_state(const GibbsState& state, const Corpus& corpus) {
  const topic_id K = state.K;
  const word_id V = state.V;
  if (static_cast<std::int64_t>(state.z.size()) != corpus.n_docs())
    fail(error_kind::internal, "state/corpus document count mismatch");
  std::vector<std::int32_t> wt(static_cast<std::size_t>(V) * K, 0);
  std::vector<std::int32_t> dt(state.z.size() * static_cast<std::size_t>(K), 0);
  std::vector<std::int64_t> tt(static_cast<std::size_t>(K), 0);
  std::int64_t total = 0;
  for (std::size_t d = 0; d < state.z.size(); ++d) {
    if (state.z[d].size() != corpus.docs[d].size())
      fail(error_kind::internal, "z length mismatch at document " + std::to_string(d));
    for (std::size_t n = 0; n < state.z[d].size(); ++n) {
      topic_id k = state.z[d][n];
      if (k < 0 || k >= K) fail(error_kind::internal, "topic assignment out of range");
      word_id v = corpus.docs[d][n];
      ++wt[static_cast<std::size_t>(v) * K + static_cast<std::size_t>(k)];
      ++dt[d * K + static_cast<std::size_t>(k)];
      ++tt[static_cast<std::size_t>(k)];
      ++total;
    }
  }
  if (wt != state.word_topic) fail(error_kind::internal, "N_kv disagrees with recount of z");
  if (dt != state.doc_topic) fail(error_kind::internal, "N_dk disagrees with recount of z");
  for (topic_id k = 0; k < K; ++k) {
    if (tt[static_cast<std::size_t>(k)] != state.topic_total[static_cast<std::size_t>(k)])
      fail(error_kind::internal, "N_k disagrees with recount of z");
  }
  if (total != state.n_tokens) fail(error_kind::internal, "token total disagrees with z");
}

/// Builds a state with the given assignments (counts recomputed from z).
/// Used by model loading and by tests that need a hand-built state.
inline GibbsState state_from_assignments(const Corpus& corpus, const LdaConfig& config,
                                         std::vector<std::vector<topic_id>> z) {
  GibbsState state;
  state.K = config.K;
  state.V = corpus.vocab_size();
  state.z = std::move(z);
  state.word_topic.assign(static_cast<std::size_t>(state.V) * state.K, 0);
  state.doc_topic.assign(state.z.size() * static_cast<std::size_t>(state.K), 0);
  state.topic_total.assign(static_cast<std::size_t>(state.K), 0);
  state.n_tokens = 0;
  if (state.z.size() != corpus.docs.size())
    fail(error_kind::argument, "assignment/document count mismatch");
  for (std::size_t d = 0; d < state.z.size(); ++d) {
    if (state.z[d].size() != corpus.docs[d].size())
      fail(error_kind::argument, "assignment length mismatch at document " + std::to_string(d));
    for (std::size_t n = 0; n < state.z[d].size(); ++n) {
      topic_id k = state.z[d][n];
      if (k < 0 || k >= state.K) fail(error_kind::argument, "topic assignment out of range");
      word_id v = corpus.docs[d][n];
      ++state.word_topic[static_cast<std::size_t>(v) * state.K + static_cast<std::size_t>(k)];
      ++state.doc_topic[d * state.K + static_cast<std::size_t>(k)];
      ++state.topic_total[static_cast<std::size_t>(k)];
      ++state.n_tokens;
    }
  }
  detail::refresh_inv_norm(state, static_cast<double>(state.V) * config.beta);
  state.gen = rng(config.seed);
  return state;
}

/// Assigns every token a uniformly random topic from the seeded stream and
/// builds the matching counts.
inline GibbsState init_state(const Corpus& corpus, const LdaConfig& config) {
  config.validate();
  if (corpus.vocab_size() == 0 || corpus.n_docs() == 0)
    fail(error_kind::config, "corpus is empty");

  GibbsState state;
  state.K = config.K;
  state.V = corpus.vocab_size();
  state.gen = rng(config.seed);
  state.word_topic.assign(static_cast<std::size_t>(state.V) * state.K, 0);
  state.doc_topic.assign(corpus.docs.size() * static_cast<std::size_t>(state.K), 0);
  state.topic_total.assign(static_cast<std::size_t>(state.K), 0);
  state.z.resize(corpus.docs.size());
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    const auto& doc = corpus.docs[d];
    state.z[d].resize(doc.size());
    for (std::size_t n = 0; n < doc.size(); ++n) {
      topic_id k = state.K == 1 ? 0 : static_cast<topic_id>(state.gen.next_below(
                                          static_cast<std::uint64_t>(state.K)));
      state.z[d][n] = k;
      ++state.word_topic[static_cast<std::size_t>(doc[n]) * state.K + static_cast<std::size_t>(k)];
      ++state.doc_topic[d * state.K + static_cast<std::size_t>(k)];
      ++state.topic_total[static_cast<std::size_t>(k)];
      ++state.n_tokens;
    }
  }
  detail::refresh_inv_norm(state, static_cast<double>(state.V) * config.beta);
  return state;
}

namespace detail {

/// Resamples token n of document d from the collapsed conditional
///   p(k) proportional to (N_kv + beta) * (N_dk + alpha) / (N_k + V*beta)
/// with the token's current assignment excluded from all counts.
inline void resample_one(GibbsState& state, const Corpus& corpus, const LdaConfig& config,
                         std::size_t d, std::size_t n, std::vector<double>& cumulative) {
  const topic_id K = state.K;
  const double v_beta = static_cast<double>(state.V) * config.beta;
  const word_id v = corpus.docs[d][n];
  const topic_id old = state.z[d][n];

  std::int32_t* nvk = &state.word_topic[static_cast<std::size_t>(v) * K];
  std::int32_t* ndk = &state.doc_topic[d * static_cast<std::size_t>(K)];
  std::int32_t* nk = state.topic_total.data();
  double* inv = state.inv_topic_norm.data();

  --nvk[old];
  --ndk[old];
  --nk[old];
  inv[old] = 1.0 / (nk[old] + v_beta);

  double total = 0.0;
  for (topic_id k = 0; k < K; ++k) {
    total += (nvk[k] + config.beta) * (ndk[k] + config.alpha) * inv[k];
    cumulative[static_cast<std::size_t>(k)] = total;
  }
  const double u = state.gen.next_double() * total;
  topic_id pick = 0;
  while (pick < K - 1 && cumulative[static_cast<std::size_t>(pick)] <= u) ++pick;

  ++nvk[pick];
  ++ndk[pick];
  ++nk[pick];
  inv[pick] = 1.0 / (nk[pick] + v_beta);
  state.z[d][n] = pick;
}

}  // namespace detail

/// Analytic collapsed conditional for one token (normalized), with that
/// token excluded from the counts. Exposed for distribution-level tests.
inline std::vector<double> token_conditional(const GibbsState& state, const Corpus& corpus,
                                             const LdaConfig& config, std::size_t d,
                                             std::size_t n) {
  const topic_id K = state.K;
  const double v_beta = static_cast<double>(state.V) * config.beta;
  const word_id v = corpus.docs[d][n];
  const topic_id old = state.z[d][n];
  std::vector<double> p(static_cast<std::size_t>(K));
  double total = 0.0;
  for (topic_id k = 0; k < K; ++k) {
    double nvk = state.n_kv(k, v) - (k == old ? 1 : 0);
    double ndk = state.n_dk(d, k) - (k == old ? 1 : 0);
    double nk = state.n_k(k) - (k == old ? 1 : 0);
    double w = (nvk + config.beta) * (ndk + config.alpha) / (nk + v_beta);
    p[static_cast<std::size_t>(k)] = w;
    total += w;
  }
  for (auto& x : p) x /= total;
  return p;
}

/// Single-token resample, public for tests; sweep() is the bulk path.
inline void resample_token(GibbsState& state, const Corpus& corpus, const LdaConfig& config,
                           std::size_t d, std::size_t n) {
  std::vector<double> cumulative(static_cast<std::size_t>(state.K));
  detail::resample_one(state, corpus, config, d, n, cumulative);
}

/// One full pass in document order, token order within document.
inline void sweep(GibbsState& state, const Corpus& corpus, const LdaConfig& config) {
  std::vector<double> cumulative(static_cast<std::size_t>(state.K));
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    const std::size_t len = corpus.docs[d].size();
    for (std::size_t n = 0; n < len; ++n)
      detail::resample_one(state, corpus, config, d, n, cumulative);
  }
  ++state.iter_done;
  if (debug_checks_enabled()) validate_state(state, corpus);
}

/// Point estimate phi_kv = (N_kv + beta) / (N_k + V*beta). Rows sum to 1;
/// beta > 0 keeps empty topics well-defined (uniform row).
inline TopicWordMatrix estimate_phi(const GibbsState& state, const LdaConfig& config) {
  TopicWordMatrix m;
  m.kind = score_kind::phi;
  m.K = state.K;
  m.V = state.V;
  m.counts = std::make_shared<TopicCounts>(state.snapshot());
  m.scores.resize(static_cast<std::size_t>(m.K) * m.V);
  const double v_beta = static_cast<double>(m.V) * config.beta;
  for (topic_id k = 0; k < m.K; ++k) {
    const double denom = state.n_k(k) + v_beta;
    for (word_id v = 0; v < m.V; ++v)
      m.scores[static_cast<std::size_t>(k) * m.V + v] = (state.n_kv(k, v) + config.beta) / denom;
  }
  return m;
}

inline TopicWordMatrix estimate_phi(const TopicCounts& counts, double beta) {
  TopicWordMatrix m;
  m.kind = score_kind::phi;
  m.K = counts.K;
  m.V = counts.V;
  m.counts = std::make_shared<TopicCounts>(counts);
  m.scores.resize(static_cast<std::size_t>(m.K) * m.V);
  const double v_beta = static_cast<double>(m.V) * beta;
  for (topic_id k = 0; k < m.K; ++k) {
    const double denom = static_cast<double>(counts.topic_total[static_cast<std::size_t>(k)]) + v_beta;
    for (word_id v = 0; v < m.V; ++v)
      m.scores[static_cast<std::size_t>(k) * m.V + v] = (counts.n_kv(k, v) + beta) / denom;
  }
  return m;
}

/// Runs n_sweeps more sweeps on an existing state, logging throughput.
inline void run_sweeps(GibbsState& state, const Corpus& corpus, const LdaConfig& config,
                       std::int32_t n_sweeps) {
  using clock = std::chrono::steady_clock;
  for (std::int32_t i = 0; i < n_sweeps; ++i) {
    auto t0 = clock::now();
    sweep(state, corpus, config);
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    double rate = secs > 0 ? static_cast<double>(state.n_tokens) / secs : 0.0;
    log_info("sweep %d: %.3fs, %.2fM tokens/sec", state.iter_done, secs, rate / 1e6);
  }
}

/// init + n_iters sweeps + phi from the final sample.
inline std::pair<GibbsState, TopicWordMatrix> train(const Corpus& corpus,
                                                    const LdaConfig& config) {
  config.validate();
  GibbsState state = init_state(corpus, config);
  run_sweeps(state, corpus, config, config.n_iters);
  TopicWordMatrix phi = estimate_phi(state, config);
  return {std::move(state), std::move(phi)};
}

}  // namespace topicrank
