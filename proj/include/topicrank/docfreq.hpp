#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "topicrank/corpus.hpp"
#include "topicrank/errors.hpp"

namespace topicrank {

/// Document-frequency statistics: D(v) for every word, co-document counts
/// D(v1,v2) for pairs of tracked words, and the corpus term frequencies
/// N_v. Duplicate tokens within one document count once.
///
/// Co-document counts are materialized only for the tracked word set; a
/// full V x V table is far too large for real vocabularies.
class DocFreqIndex {
 public:
  DocFreqIndex() = default;

  std::int64_t n_docs() const { return n_docs_; }

  std::int64_t doc_freq(word_id v) const { return df_.at(static_cast<std::size_t>(v)); }

  std::int64_t term_freq(word_id v) const { return tf_.at(static_cast<std::size_t>(v)); }

  bool tracked(word_id v) const {
    return v >= 0 && static_cast<std::size_t>(v) < tracked_.size() &&
           tracked_[static_cast<std::size_t>(v)] != 0;
  }

  /// D(v1,v2); both words must be tracked. D(v,v) is D(v).
  std::int64_t co_doc_freq(word_id v1, word_id v2) const {
    if (!tracked(v1) || !tracked(v2))
      fail(error_kind::index,
           "co-document count not tracked for word pair (" + std::to_string(v1) + "," +
               std::to_string(v2) + "); rebuild the index tracking these words");
    if (v1 == v2) return doc_freq(v1);
    auto it = codf_.find(pair_key(v1, v2));
    return it == codf_.end() ? 0 : it->second;
  }

  static DocFreqIndex build(const Corpus& corpus, const std::vector<word_id>& track_pairs) {
    DocFreqIndex index;
    const std::size_t V = static_cast<std::size_t>(corpus.vocab_size());
    index.n_docs_ = corpus.n_docs();
    index.df_.assign(V, 0);
    index.tf_ = corpus.word_freq;
    index.tracked_.assign(V, 0);
    for (word_id v : track_pairs) {
      if (v < 0 || static_cast<std::size_t>(v) >= V)
        fail(error_kind::argument, "track_pairs id out of range: " + std::to_string(v));
      index.tracked_[static_cast<std::size_t>(v)] = 1;
    }

    std::vector<word_id> uniq;
    std::vector<word_id> tracked_uniq;
    for (const auto& doc : corpus.docs) {
      uniq.assign(doc.begin(), doc.end());
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      tracked_uniq.clear();
      for (word_id v : uniq) {
        ++index.df_[static_cast<std::size_t>(v)];
        if (index.tracked_[static_cast<std::size_t>(v)]) tracked_uniq.push_back(v);
      }
      for (std::size_t i = 0; i < tracked_uniq.size(); ++i)
        for (std::size_t j = i + 1; j < tracked_uniq.size(); ++j)
          ++index.codf_[pair_key(tracked_uniq[i], tracked_uniq[j])];
    }
    return index;
  }

 private:
  static std::uint64_t pair_key(word_id a, word_id b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }

  std::int64_t n_docs_ = 0;
  std::vector<std::int64_t> df_;
  std::vector<std::int64_t> tf_;
  std::vector<std::uint8_t> tracked_;
  std::unordered_map<std::uint64_t, std::int32_t> codf_;
};

inline DocFreqIndex build_docfreq(const Corpus& corpus, const std::vector<word_id>& track_pairs) {
  return DocFreqIndex::build(corpus, track_pairs);
}

}  // namespace topicrank
