#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "topicrank/docfreq.hpp"
#include "topicrank/errors.hpp"
#include "topicrank/rerank.hpp"
#include "topicrank/rng.hpp"

namespace topicrank {

/// Co-document coherence of a topic's top-M list:
///   sum over m=2..M, l=1..m-1 of log((D(v_m,v_l) + eps) / D(v_l))
/// The denominator is the earlier-ranked word's document frequency; the
/// asymmetry is part of the metric's definition. Values nearer zero mean
/// the list co-occurs more.
inline double coherence(const RankedTopic& topic_words, const DocFreqIndex& dfindex,
                        double epsilon) {
  const std::size_t M = topic_words.words.size();
  if (M < 2) fail(error_kind::argument, "coherence: needs at least 2 ranked words");
  if (!(epsilon > 0.0)) fail(error_kind::argument, "coherence: epsilon must be > 0");
  double sum = 0.0;
  for (std::size_t m = 1; m < M; ++m) {
    for (std::size_t l = 0; l < m; ++l) {
      const word_id vm = topic_words.words[m].first;
      const word_id vl = topic_words.words[l].first;
      const std::int64_t d_l = dfindex.doc_freq(vl);
      if (d_l == 0)
        fail(error_kind::metric, "coherence undefined for topic " +
                                     std::to_string(topic_words.topic) + ": D(word " +
                                     std::to_string(vl) + ") = 0");
      const std::int64_t co = dfindex.co_doc_freq(vm, vl);
      sum += std::log((static_cast<double>(co) + epsilon) / static_cast<double>(d_l));
    }
  }
  return sum;
}

enum class intrusion_pattern { s_voc, s_topic, s_self };

inline const char* to_string(intrusion_pattern p) {
  switch (p) {
    case intrusion_pattern::s_voc: return "s_voc";
    case intrusion_pattern::s_topic: return "s_topic";
    case intrusion_pattern::s_self: return "s_self";
  }
  return "?";
}

inline intrusion_pattern parse_intrusion_pattern(const std::string& s) {
  if (s == "s_voc") return intrusion_pattern::s_voc;
  if (s == "s_topic") return intrusion_pattern::s_topic;
  if (s == "s_self") return intrusion_pattern::s_self;
  fail(error_kind::argument, "unknown pattern '" + s + "' (expected s_voc|s_topic|s_self)");
}

/// One word-intrusion instance: six words shown in randomized order, five
/// of them the topic's surviving top words, one the planted intruder.
struct IntrusionTask {
  topic_id topic = 0;
  std::array<word_id, 6> shown{};
  word_id true_intruder = -1;
  intrusion_pattern pattern = intrusion_pattern::s_voc;
  std::uint64_t seed = 0;
  std::int32_t intruder_rank = -1;  // 1-based rank in its source list (s_self only)
};

namespace detail {

/// j-th smallest id in [0, V) that is not in `excluded` (sorted).
inline word_id nth_id_excluding(word_id vocab_size, const std::vector<word_id>& excluded,
                                std::uint64_t j) {
  word_id candidate = static_cast<word_id>(j);
  for (word_id ex : excluded) {
    if (ex <= candidate) ++candidate;
  }
  if (candidate >= vocab_size)
    fail(error_kind::internal, "nth_id_excluding: index out of range");
  return candidate;
}

}  // namespace detail

/// Generates one intrusion task per topic. All randomness (which top word
/// to drop, which intruder to plant, presentation order) comes from the
/// given seed, so the same inputs always yield the same task set.
///
/// Intruder pools:
///   s_voc    uniform over the vocabulary, excluding the topic's own top 6
///   s_topic  uniform over the union of the other topics' top-6 lists,
///            excluding the current topic's top 6
///   s_self   uniform over the current topic's rank 11..100 words
inline std::vector<IntrusionTask> make_intrusion_tasks(const std::vector<RankedTopic>& ranked,
                                                       intrusion_pattern pattern,
                                                       word_id vocab_size, std::uint64_t seed) {
  if (ranked.empty()) fail(error_kind::argument, "make_intrusion_tasks: no topics");
  const std::size_t need = pattern == intrusion_pattern::s_self ? 100 : 6;
  for (const auto& t : ranked) {
    if (t.words.size() < need)
      fail(error_kind::generation, "make_intrusion_tasks: topic " + std::to_string(t.topic) +
                                       " has only " + std::to_string(t.words.size()) +
                                       " ranked words, pattern " + to_string(pattern) +
                                       " needs " + std::to_string(need));
  }

  rng gen(seed);
  std::vector<IntrusionTask> tasks;
  tasks.reserve(ranked.size());
  for (std::size_t idx = 0; idx < ranked.size(); ++idx) {
    const auto& topic = ranked[idx];
    std::vector<word_id> top6;
    for (std::size_t i = 0; i < 6; ++i) top6.push_back(topic.words[i].first);
    std::vector<word_id> top6_sorted = top6;
    std::sort(top6_sorted.begin(), top6_sorted.end());

    const std::size_t drop = static_cast<std::size_t>(gen.next_below(6));

    word_id intruder = -1;
    std::int32_t intruder_rank = -1;
    switch (pattern) {
      case intrusion_pattern::s_voc: {
        if (vocab_size <= 6)
          fail(error_kind::generation, "s_voc: vocabulary has no words outside the top 6");
        std::uint64_t j = gen.next_below(static_cast<std::uint64_t>(vocab_size) - 6);
        intruder = detail::nth_id_excluding(vocab_size, top6_sorted, j);
        break;
      }
      case intrusion_pattern::s_topic: {
        std::set<word_id> pool;
        for (std::size_t other = 0; other < ranked.size(); ++other) {
          if (other == idx) continue;
          for (std::size_t i = 0; i < 6; ++i) pool.insert(ranked[other].words[i].first);
        }
        for (word_id w : top6) pool.erase(w);
        if (pool.empty())
          fail(error_kind::generation,
               "s_topic: no candidate intruders (need at least two topics with distinct top words)");
        std::vector<word_id> pool_vec(pool.begin(), pool.end());
        intruder = pool_vec[static_cast<std::size_t>(gen.next_below(pool_vec.size()))];
        break;
      }
      case intrusion_pattern::s_self: {
        // ranks 11..100, i.e. list indices 10..99
        const std::size_t pick = 10 + static_cast<std::size_t>(gen.next_below(90));
        intruder = topic.words[pick].first;
        intruder_rank = static_cast<std::int32_t>(pick + 1);
        break;
      }
    }

    std::vector<word_id> shown;
    for (std::size_t i = 0; i < 6; ++i) {
      if (i != drop) shown.push_back(top6[i]);
    }
    shown.push_back(intruder);
    gen.shuffle(shown);

    IntrusionTask task;
    task.topic = topic.topic;
    std::copy(shown.begin(), shown.end(), task.shown.begin());
    task.true_intruder = intruder;
    task.pattern = pattern;
    task.seed = seed;
    task.intruder_rank = intruder_rank;
    tasks.push_back(task);
  }
  return tasks;
}

/// Symmetrized co-document association of two words,
///   s(w,w') = 1/2 * [ log((D(w,w')+eps)/D(w')) + log((D(w,w')+eps)/D(w)) ].
inline double word_association(word_id w, word_id w2, const DocFreqIndex& dfindex,
                               double epsilon) {
  const std::int64_t dw = dfindex.doc_freq(w);
  const std::int64_t dw2 = dfindex.doc_freq(w2);
  if (dw == 0 || dw2 == 0)
    fail(error_kind::metric, "word association undefined: D(word)=0 for word " +
                                 std::to_string(dw == 0 ? w : w2));
  const double co = static_cast<double>(dfindex.co_doc_freq(w, w2)) + epsilon;
  return 0.5 * (std::log(co / static_cast<double>(dw2)) + std::log(co / static_cast<double>(dw)));
}

/// Deterministic stand-in for a human judge: flags the word least
/// associated (on average) with the other five, using the same co-document
/// statistics the coherence metric uses. Ties go to the word with the
/// lower corpus frequency, then the lower id. The presentation order of
/// the six words never affects the outcome.
inline word_id detect_intruder(const IntrusionTask& task, const DocFreqIndex& dfindex,
                               double epsilon) {
  if (!(epsilon > 0.0)) fail(error_kind::argument, "detect_intruder: epsilon must be > 0");
  word_id best = -1;
  double best_mean = 0.0;
  for (std::size_t i = 0; i < task.shown.size(); ++i) {
    const word_id w = task.shown[i];
    double sum = 0.0;
    for (std::size_t j = 0; j < task.shown.size(); ++j) {
      if (j == i) continue;
      sum += word_association(w, task.shown[j], dfindex, epsilon);
    }
    const double mean = sum / static_cast<double>(task.shown.size() - 1);
    if (best < 0 || mean < best_mean ||
        (mean == best_mean && (dfindex.term_freq(w) < dfindex.term_freq(best) ||
                               (dfindex.term_freq(w) == dfindex.term_freq(best) && w < best)))) {
      best = w;
      best_mean = mean;
    }
  }
  return best;
}

/// Fraction of tasks where the detected word is the true intruder.
inline double intrusion_accuracy(const std::vector<std::pair<word_id, word_id>>& detected_true) {
  if (detected_true.empty()) fail(error_kind::argument, "intrusion_accuracy: no results");
  std::size_t hits = 0;
  for (const auto& [detected, truth] : detected_true)
    if (detected == truth) ++hits;
  return static_cast<double>(hits) / static_cast<double>(detected_true.size());
}

struct IntrusionRepeat {
  std::uint64_t seed = 0;
  std::vector<IntrusionTask> tasks;
  std::vector<word_id> detected;
  double accuracy = 0.0;
};

struct MethodIntrusionResult {
  rank_method method = rank_method::norm;
  intrusion_pattern pattern = intrusion_pattern::s_voc;
  std::vector<IntrusionRepeat> repeats;
  double mean_accuracy = 0.0;
};

/// Accuracy per intruder-rank decade [11-20], [21-30], ..., [91-100] over
/// all repeats. Only meaningful for s_self tasks. Buckets nobody sampled
/// report -1.
struct BucketAccuracy {
  std::array<std::int64_t, 9> total{};
  std::array<std::int64_t, 9> hits{};

  static int bucket_of(std::int32_t rank) { return (rank - 11) / 10; }

  double accuracy(int bucket) const {
    return total[static_cast<std::size_t>(bucket)] == 0
               ? -1.0
               : static_cast<double>(hits[static_cast<std::size_t>(bucket)]) /
                     static_cast<double>(total[static_cast<std::size_t>(bucket)]);
  }

  double mean_over_buckets() const {
    double sum = 0.0;
    int n = 0;
    for (int b = 0; b < 9; ++b) {
      if (total[static_cast<std::size_t>(b)] > 0) {
        sum += accuracy(b);
        ++n;
      }
    }
    return n == 0 ? -1.0 : sum / n;
  }
};

inline BucketAccuracy bucket_accuracy(const MethodIntrusionResult& result) {
  BucketAccuracy out;
  for (const auto& rep : result.repeats) {
    for (std::size_t i = 0; i < rep.tasks.size(); ++i) {
      const auto& task = rep.tasks[i];
      if (task.intruder_rank < 11 || task.intruder_rank > 100) continue;
      const int b = BucketAccuracy::bucket_of(task.intruder_rank);
      ++out.total[static_cast<std::size_t>(b)];
      if (rep.detected[i] == task.true_intruder) ++out.hits[static_cast<std::size_t>(b)];
    }
  }
  return out;
}

/// Generates tasks with seeds seed, seed+1, ..., seed+repeats-1, detects
/// each intruder, and averages. The seed schedule means growing `repeats`
/// reuses the earlier repeats' tasks unchanged.
inline MethodIntrusionResult run_intrusion_repeats(const std::vector<RankedTopic>& ranked,
                                                   intrusion_pattern pattern, std::int32_t repeats,
                                                   const DocFreqIndex& dfindex, word_id vocab_size,
                                                   double epsilon, std::uint64_t seed,
                                                   rank_method method) {
  if (repeats < 1) fail(error_kind::argument, "run_intrusion_repeats: repeats must be >= 1");
  MethodIntrusionResult result;
  result.method = method;
  result.pattern = pattern;
  double sum = 0.0;
  for (std::int32_t r = 0; r < repeats; ++r) {
    IntrusionRepeat rep;
    rep.seed = seed + static_cast<std::uint64_t>(r);
    rep.tasks = make_intrusion_tasks(ranked, pattern, vocab_size, rep.seed);
    std::vector<std::pair<word_id, word_id>> pairs;
    pairs.reserve(rep.tasks.size());
    for (const auto& task : rep.tasks) {
      word_id detected = detect_intruder(task, dfindex, epsilon);
      rep.detected.push_back(detected);
      pairs.emplace_back(detected, task.true_intruder);
    }
    rep.accuracy = intrusion_accuracy(pairs);
    sum += rep.accuracy;
    result.repeats.push_back(std::move(rep));
  }
  result.mean_accuracy = sum / static_cast<double>(repeats);
  return result;
}

/// Benchmark over several methods' ranked lists with a shared seed
/// schedule.
inline std::vector<MethodIntrusionResult> run_intrusion_benchmark(
    const std::vector<std::pair<rank_method, std::vector<RankedTopic>>>& ranked_per_method,
    intrusion_pattern pattern, std::int32_t repeats, const DocFreqIndex& dfindex,
    word_id vocab_size, double epsilon, std::uint64_t seed) {
  std::vector<MethodIntrusionResult> out;
  out.reserve(ranked_per_method.size());
  for (const auto& [method, ranked] : ranked_per_method) {
    out.push_back(run_intrusion_repeats(ranked, pattern, repeats, dfindex, vocab_size, epsilon,
                                        seed, method));
    log_info("intrusion %s/%s: mean accuracy %.4f", to_string(method), to_string(pattern),
             out.back().mean_accuracy);
  }
  return out;
}

/// Every word any task will show, for building a DocFreqIndex that tracks
/// exactly what detection needs. Mirrors the generation seed schedule.
inline std::vector<word_id> collect_intrusion_words(
    const std::vector<std::pair<rank_method, std::vector<RankedTopic>>>& ranked_per_method,
    const std::vector<intrusion_pattern>& patterns, std::int32_t repeats, word_id vocab_size,
    std::uint64_t seed) {
  std::set<word_id> words;
  for (const auto& [method, ranked] : ranked_per_method) {
    (void)method;
    for (intrusion_pattern pattern : patterns) {
      for (std::int32_t r = 0; r < repeats; ++r) {
        auto tasks =
            make_intrusion_tasks(ranked, pattern, vocab_size, seed + static_cast<std::uint64_t>(r));
        for (const auto& task : tasks) words.insert(task.shown.begin(), task.shown.end());
      }
    }
  }
  return {words.begin(), words.end()};
}

}  // namespace topicrank
