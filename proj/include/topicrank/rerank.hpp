#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "topicrank/errors.hpp"
#include "topicrank/io_util.hpp"
#include "topicrank/lda.hpp"

namespace topicrank {

enum class rank_method { norm, sdw, sdwts, chi };

inline const char* to_string(rank_method m) {
  switch (m) {
    case rank_method::norm: return "norm";
    case rank_method::sdw: return "sdw";
    case rank_method::sdwts: return "sdwts";
    case rank_method::chi: return "chi";
  }
  return "?";
}

inline rank_method parse_rank_method(const std::string& s) {
  if (s == "norm") return rank_method::norm;
  if (s == "sdw") return rank_method::sdw;
  if (s == "sdwts") return rank_method::sdwts;
  if (s == "chi") return rank_method::chi;
  fail(error_kind::argument, "unknown method '" + s + "' (expected norm|sdw|sdwts|chi)");
}

inline rank_method method_of(score_kind kind) {
  switch (kind) {
    case score_kind::phi: return rank_method::norm;
    case score_kind::sdw: return rank_method::sdw;
    case score_kind::sdwts: return rank_method::sdwts;
    case score_kind::chi: return rank_method::chi;
  }
  return rank_method::norm;
}

/// The deviation weight's printed form is typographically ambiguous about
/// whether the square applies to each term of the sum or to the whole sum.
/// Per-term squares make it a pseudo standard deviation and are the
/// default; the collapsed |sum| reading is kept for comparison.
enum class deviation_form { per_term_square, squared_sum };

/// Ordered top-M list for one topic under one scoring method.
/// Scores are non-increasing; ties are broken by descending raw N_kv and
/// then ascending word id, so rankings are deterministic.
struct RankedTopic {
  topic_id topic = 0;
  rank_method method = rank_method::norm;
  std::vector<std::pair<word_id, double>> words;
};

namespace detail {

inline void require_phi(const TopicWordMatrix& m, const char* op) {
  if (m.kind != score_kind::phi)
    fail(error_kind::argument, std::string(op) + " expects phi scores, got " + to_string(m.kind));
  if (!m.counts) fail(error_kind::argument, std::string(op) + ": matrix lacks a count snapshot");
}

inline void require_multi_topic(topic_id K, const char* op) {
  if (K < 2)
    fail(error_kind::method,
         std::string(op) + " is undefined for K=1 (the cross-topic deviation is an empty sum)");
}

}  // namespace detail

/// Ranking by phi itself. Identity on the scores, kept as an explicit
/// operation so all four representations flow through the same interface.
inline TopicWordMatrix score_norm(const TopicWordMatrix& phi) {
  detail::require_phi(phi, "score_norm");
  return phi;
}

/// Pseudo-standard-deviation weight of word v in topic k over the other
/// topics' probabilities, times phi_kv.
inline TopicWordMatrix score_sdw(const TopicWordMatrix& phi,
                                 deviation_form form = deviation_form::per_term_square) {
  detail::require_phi(phi, "score_sdw");
  detail::require_multi_topic(phi.K, "score_sdw");
  TopicWordMatrix out;
  out.kind = score_kind::sdw;
  out.K = phi.K;
  out.V = phi.V;
  out.counts = phi.counts;
  out.scores.resize(phi.scores.size());
  std::vector<double> column(static_cast<std::size_t>(phi.K));
  for (word_id v = 0; v < phi.V; ++v) {
    for (topic_id k = 0; k < phi.K; ++k) column[static_cast<std::size_t>(k)] = phi.at(k, v);
    for (topic_id k = 0; k < phi.K; ++k) {
      const double own = column[static_cast<std::size_t>(k)];
      double weight = 0.0;
      if (form == deviation_form::per_term_square) {
        double sum_sq = 0.0;
        for (topic_id i = 0; i < phi.K; ++i) {
          if (i == k) continue;
          const double diff = own - column[static_cast<std::size_t>(i)];
          sum_sq += diff * diff;
        }
        weight = std::sqrt(sum_sq);
      } else {
        double sum = 0.0;
        for (topic_id i = 0; i < phi.K; ++i) {
          if (i == k) continue;
          sum += own - column[static_cast<std::size_t>(i)];
        }
        weight = std::abs(sum);
      }
      out.scores[static_cast<std::size_t>(k) * phi.V + v] = weight * own;
    }
  }
  return out;
}

/// Deviation weight on raw assignment counts (the count-form simplification
/// of the topic-size-weighted deviation), times phi_kv.
inline TopicWordMatrix score_sdwts(const TopicWordMatrix& phi,
                                   deviation_form form = deviation_form::per_term_square) {
  detail::require_phi(phi, "score_sdwts");
  detail::require_multi_topic(phi.K, "score_sdwts");
  const TopicCounts& counts = *phi.counts;
  TopicWordMatrix out;
  out.kind = score_kind::sdwts;
  out.K = phi.K;
  out.V = phi.V;
  out.counts = phi.counts;
  out.scores.resize(phi.scores.size());
  std::vector<std::int64_t> column(static_cast<std::size_t>(phi.K));
  for (word_id v = 0; v < phi.V; ++v) {
    for (topic_id k = 0; k < phi.K; ++k)
      column[static_cast<std::size_t>(k)] = counts.n_kv(k, v);
    for (topic_id k = 0; k < phi.K; ++k) {
      const std::int64_t own = column[static_cast<std::size_t>(k)];
      double weight = 0.0;
      if (form == deviation_form::per_term_square) {
        double sum_sq = 0.0;
        for (topic_id i = 0; i < phi.K; ++i) {
          if (i == k) continue;
          const double diff = static_cast<double>(own - column[static_cast<std::size_t>(i)]);
          sum_sq += diff * diff;
        }
        weight = std::sqrt(sum_sq);
      } else {
        std::int64_t sum = 0;
        for (topic_id i = 0; i < phi.K; ++i) {
          if (i == k) continue;
          sum += own - column[static_cast<std::size_t>(i)];
        }
        weight = std::abs(static_cast<double>(sum));
      }
      out.scores[static_cast<std::size_t>(k) * phi.V + v] = weight * phi.at(k, v);
    }
  }
  return out;
}

/// 2x2 contingency chi-square of (word v, topic k) membership:
///   a=N_kv  b=N_k-N_kv  c=N_v-N_kv  d=N-N_k-N_v+N_kv
///   chi2 = N (ad - bc)^2 / ((a+b)(c+d)(a+c)(b+d))
/// A zero marginal carries no discriminative evidence and scores 0.
inline double chi_square_cell(std::int64_t n_kv, std::int64_t n_k, std::int64_t n_v,
                              std::int64_t n) {
  if (n <= 0) fail(error_kind::argument, "chi_square_cell: N must be positive");
  const std::int64_t a = n_kv;
  const std::int64_t b = n_k - n_kv;
  const std::int64_t c = n_v - n_kv;
  const std::int64_t d = n - n_k - n_v + n_kv;
  if (a < 0 || b < 0 || c < 0 || d < 0)
    fail(error_kind::internal, "chi_square_cell: negative contingency cell (inconsistent counts)");
  const std::int64_t row1 = n_k, row2 = n - n_k, col1 = n_v, col2 = n - n_v;
  if (row1 == 0 || row2 == 0 || col1 == 0 || col2 == 0) return 0.0;
  const double diff = static_cast<double>(a) * static_cast<double>(d) -
                      static_cast<double>(b) * static_cast<double>(c);
  return static_cast<double>(n) * diff * diff /
         (static_cast<double>(row1) * static_cast<double>(row2) * static_cast<double>(col1) *
          static_cast<double>(col2));
}

inline TopicWordMatrix score_chi(const std::shared_ptr<const TopicCounts>& counts) {
  if (!counts) fail(error_kind::argument, "score_chi: null counts");
  const TopicCounts& c = *counts;
  if (c.total <= 0) fail(error_kind::argument, "score_chi: empty counts");
  TopicWordMatrix out;
  out.kind = score_kind::chi;
  out.K = c.K;
  out.V = c.V;
  out.counts = counts;
  out.scores.resize(static_cast<std::size_t>(c.K) * c.V);
  for (topic_id k = 0; k < c.K; ++k) {
    const std::int64_t n_k = c.topic_total[static_cast<std::size_t>(k)];
    for (word_id v = 0; v < c.V; ++v) {
      out.scores[static_cast<std::size_t>(k) * c.V + v] =
          chi_square_cell(c.n_kv(k, v), n_k, c.word_total[static_cast<std::size_t>(v)], c.total);
    }
  }
  return out;
}

inline TopicWordMatrix score_chi(const TopicWordMatrix& phi) {
  detail::require_phi(phi, "score_chi");
  return score_chi(phi.counts);
}

/// Top-m words per topic under the matrix's scores, with the deterministic
/// tie-break (score desc, then N_kv desc, then word id asc). Every method
/// ranks the full vocabulary, so a word far outside the phi top-m can
/// surface here.
inline std::vector<RankedTopic> top_m(const TopicWordMatrix& matrix, word_id m) {
  if (m < 1) fail(error_kind::argument, "top_m: m must be >= 1");
  if (m > matrix.V)
    fail(error_kind::argument, "top_m: m=" + std::to_string(m) + " exceeds vocabulary size " +
                                   std::to_string(matrix.V));
  if (!matrix.counts) fail(error_kind::argument, "top_m: matrix lacks a count snapshot");
  const TopicCounts& counts = *matrix.counts;
  std::vector<RankedTopic> out;
  out.reserve(static_cast<std::size_t>(matrix.K));
  std::vector<word_id> order(static_cast<std::size_t>(matrix.V));
  for (topic_id k = 0; k < matrix.K; ++k) {
    const double* row = &matrix.scores[static_cast<std::size_t>(k) * matrix.V];
    const std::int32_t* count_row = &counts.topic_word[static_cast<std::size_t>(k) * matrix.V];
    std::iota(order.begin(), order.end(), 0);
    auto better = [&](word_id a, word_id b) {
      if (row[a] != row[b]) return row[a] > row[b];
      if (count_row[a] != count_row[b]) return count_row[a] > count_row[b];
      return a < b;
    };
    std::partial_sort(order.begin(), order.begin() + m, order.end(), better);
    RankedTopic topic;
    topic.topic = k;
    topic.method = method_of(matrix.kind);
    topic.words.reserve(static_cast<std::size_t>(m));
    for (word_id i = 0; i < m; ++i) topic.words.emplace_back(order[i], row[order[i]]);
    out.push_back(std::move(topic));
  }
  return out;
}

/// TSV rows `topic_id method rank word score`, rank starting at 1.
inline void write_ranked_tsv(std::ostream& os, const std::vector<RankedTopic>& topics,
                             const Vocabulary& vocab) {
  os << "topic_id\tmethod\trank\tword\tscore\n";
  for (const auto& t : topics) {
    for (std::size_t i = 0; i < t.words.size(); ++i) {
      os << t.topic << '\t' << to_string(t.method) << '\t' << (i + 1) << '\t'
         << vocab.word(t.words[i].first) << '\t' << fmt_score(t.words[i].second) << '\n';
    }
  }
}

}  // namespace topicrank
