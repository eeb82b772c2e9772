#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "topicrank/errors.hpp"
#include "topicrank/io_util.hpp"
#include "topicrank/log.hpp"

namespace topicrank {

using word_id = std::int32_t;

/// Dense word/id bijection. Ids are assigned 0..V-1 in first-appearance
/// order of the surviving tokens, so ingestion is deterministic.
struct Vocabulary {
  std::vector<std::string> id_to_word;
  std::unordered_map<std::string, word_id> word_to_id;

  word_id size() const { return static_cast<word_id>(id_to_word.size()); }

  word_id add(const std::string& w) {
    auto it = word_to_id.find(w);
    if (it != word_to_id.end()) return it->second;
    word_id id = size();
    id_to_word.push_back(w);
    word_to_id.emplace(w, id);
    return id;
  }

  // -1 when absent
  word_id id_of(const std::string& w) const {
    auto it = word_to_id.find(w);
    return it == word_to_id.end() ? word_id(-1) : it->second;
  }

  const std::string& word(word_id id) const { return id_to_word[static_cast<std::size_t>(id)]; }
};

/// Tokenized documents over integer word ids, plus per-word corpus
/// frequencies. Immutable once built; all downstream stages share it
/// read-only.
struct Corpus {
  std::vector<std::vector<word_id>> docs;
  Vocabulary vocab;
  std::vector<std::int64_t> word_freq;  // occurrences of each word type
  std::int64_t n_tokens = 0;
  std::int64_t n_empty_docs = 0;

  std::int64_t n_docs() const { return static_cast<std::int64_t>(docs.size()); }
  word_id vocab_size() const { return vocab.size(); }
};

namespace detail {

/// Lowercase and strip non-alphanumeric punctuation off both ends.
/// ASCII-only case folding; bytes >= 0x80 are kept as word characters.
inline std::string normalize_token(const std::string& raw) {
  std::size_t b = 0, e = raw.size();
  auto is_word_char = [](unsigned char c) {
    return c >= 0x80 || std::isalnum(c);
  };
  while (b < e && !is_word_char(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && !is_word_char(static_cast<unsigned char>(raw[e - 1]))) --e;
  std::string out;
  out.reserve(e - b);
  for (std::size_t i = b; i < e; ++i) {
    unsigned char c = static_cast<unsigned char>(raw[i]);
    out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : raw[i]);
  }
  return out;
}

inline std::vector<std::string> tokenize_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < n && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) {
      std::string tok = normalize_token(line.substr(start, i - start));
      if (!tok.empty()) out.push_back(std::move(tok));
    }
  }
  return out;
}

}  // namespace detail

/// Stopword file: one word per line, matched after the same normalization
/// applied to corpus tokens.
inline std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(error_kind::ingest, "cannot open stopword file: " + path);
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    std::string w = detail::normalize_token(line);
    if (!w.empty()) out.insert(w);
  }
  return out;
}

/// Builds a Corpus from one-document-per-line UTF-8 text files.
///
/// Tokens are lowercased, whitespace-split, and stripped of edge
/// punctuation. Words in `stopwords` are dropped, then words with corpus
/// frequency below `min_count`. Documents that end up empty stay in place
/// (indices are stable) and are counted in n_empty_docs.
inline Corpus ingest(const std::vector<std::string>& paths,
                     const std::unordered_set<std::string>* stopwords = nullptr,
                     std::int64_t min_count = 1) {
  std::vector<std::vector<std::string>> raw_docs;
  std::unordered_map<std::string, std::int64_t> freq;
  for (const auto& path : paths) {
    std::ifstream is(path);
    if (!is) fail(error_kind::ingest, "cannot open corpus file: " + path);
    std::string line;
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::vector<std::string> toks = detail::tokenize_line(line);
      if (stopwords) {
        std::erase_if(toks, [&](const std::string& t) { return stopwords->count(t) > 0; });
      }
      for (const auto& t : toks) ++freq[t];
      raw_docs.push_back(std::move(toks));
    }
  }

  Corpus corpus;
  for (const auto& toks : raw_docs) {
    std::vector<word_id> ids;
    ids.reserve(toks.size());
    for (const auto& t : toks) {
      if (min_count > 1 && freq[t] < min_count) continue;
      ids.push_back(corpus.vocab.add(t));
    }
    if (ids.empty()) ++corpus.n_empty_docs;
    corpus.n_tokens += static_cast<std::int64_t>(ids.size());
    corpus.docs.push_back(std::move(ids));
  }

  corpus.word_freq.assign(corpus.vocab.size(), 0);
  for (const auto& doc : corpus.docs)
    for (word_id w : doc) ++corpus.word_freq[static_cast<std::size_t>(w)];

  if (corpus.vocab.size() == 0)
    fail(error_kind::config, "vocabulary empty after filtering");
  if (corpus.n_empty_docs > 0)
    log_info("ingest: %lld of %lld documents are empty after filtering",
             static_cast<long long>(corpus.n_empty_docs),
             static_cast<long long>(corpus.n_docs()));
  return corpus;
}

/// Line-oriented corpus file: header `V n_docs n_tokens`, V vocabulary
/// lines `id word freq`, then one line of space-separated token ids per
/// document. save/load round-trips bit-exactly.
inline void save_corpus(const Corpus& corpus, std::ostream& os) {
  os << corpus.vocab.size() << ' ' << corpus.n_docs() << ' ' << corpus.n_tokens << '\n';
  for (word_id v = 0; v < corpus.vocab.size(); ++v) {
    os << v << ' ' << corpus.vocab.word(v) << ' '
       << corpus.word_freq[static_cast<std::size_t>(v)] << '\n';
  }
  for (const auto& doc : corpus.docs) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (i) os.put(' ');
      os << doc[i];
    }
    os.put('\n');
  }
}

inline void save_corpus(const Corpus& corpus, const std::string& path) {
  atomic_write(path, [&](std::ostream& os) { save_corpus(corpus, os); });
}

inline Corpus load_corpus(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(error_kind::ingest, "cannot open corpus file: " + path);
  std::string line;
  std::int64_t lineno = 0;
  auto next_line = [&](const char* section) -> std::string& {
    if (!std::getline(is, line))
      fail(error_kind::parse, path + ": truncated file, missing " + section +
                                  " (line " + std::to_string(lineno + 1) + ")");
    ++lineno;
    return line;
  };

  Corpus corpus;
  {
    auto fields = split_ws(next_line("header"));
    if (fields.size() != 3)
      fail(error_kind::parse, path + ":1: header must be 'V n_docs n_tokens'");
    word_id V = static_cast<word_id>(parse_int(fields[0], "V"));
    std::int64_t n_docs = parse_int(fields[1], "n_docs");
    std::int64_t n_tokens = parse_int(fields[2], "n_tokens");
    corpus.word_freq.assign(static_cast<std::size_t>(V), 0);
    for (word_id v = 0; v < V; ++v) {
      auto vf = split_ws(next_line("vocabulary"));
      if (vf.size() != 3)
        fail(error_kind::parse,
             path + ":" + std::to_string(lineno) + ": vocabulary line must be 'id word freq'");
      if (parse_int(vf[0], "word id") != v)
        fail(error_kind::parse,
             path + ":" + std::to_string(lineno) + ": vocabulary ids must be dense and in order");
      corpus.vocab.add(vf[1]);
      corpus.word_freq[static_cast<std::size_t>(v)] = parse_int(vf[2], "word freq");
    }
    corpus.docs.reserve(static_cast<std::size_t>(n_docs));
    for (std::int64_t d = 0; d < n_docs; ++d) {
      auto ids = split_ws(next_line("document"));
      std::vector<word_id> doc;
      doc.reserve(ids.size());
      for (const auto& s : ids) {
        std::int64_t id = parse_int(s, "token id");
        if (id < 0 || id >= V)
          fail(error_kind::parse,
               path + ":" + std::to_string(lineno) + ": token id out of range: " + s);
        doc.push_back(static_cast<word_id>(id));
      }
      if (doc.empty()) ++corpus.n_empty_docs;
      corpus.n_tokens += static_cast<std::int64_t>(doc.size());
      corpus.docs.push_back(std::move(doc));
    }
    if (corpus.n_tokens != n_tokens)
      fail(error_kind::parse, path + ": token count mismatch: header says " +
                                  std::to_string(n_tokens) + ", documents hold " +
                                  std::to_string(corpus.n_tokens));
    std::vector<std::int64_t> recount(static_cast<std::size_t>(V), 0);
    for (const auto& doc : corpus.docs)
      for (word_id w : doc) ++recount[static_cast<std::size_t>(w)];
    if (recount != corpus.word_freq)
      fail(error_kind::parse, path + ": vocabulary frequencies disagree with documents");
  }
  return corpus;
}

}  // namespace topicrank
