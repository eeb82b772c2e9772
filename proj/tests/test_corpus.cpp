#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "test_util.hpp"
#include "topicrank/corpus.hpp"

using namespace topicrank;
using testutil::TempDir;
using testutil::write_text;

TEST_CASE("token normalization lowercases and strips edge punctuation") {
  REQUIRE(detail::normalize_token("Hello,") == "hello");
  REQUIRE(detail::normalize_token("((World))") == "world");
  REQUIRE(detail::normalize_token("don't") == "don't");
  REQUIRE(detail::normalize_token("--don't--") == "don't");
  REQUIRE(detail::normalize_token("123abc") == "123abc");
  REQUIRE(detail::normalize_token("---") == "");
  REQUIRE(detail::normalize_token("") == "");
  REQUIRE(detail::normalize_token("A") == "a");
}

TEST_CASE("normalization keeps non-ASCII bytes") {
  REQUIRE(detail::normalize_token("Caf\xC3\xA9.") == "caf\xC3\xA9");
}

TEST_CASE("line tokenization splits on any whitespace") {
  auto toks = detail::tokenize_line("  The  quick\tBROWN fox. ");
  REQUIRE(toks == std::vector<std::string>{"the", "quick", "brown", "fox"});
  REQUIRE(detail::tokenize_line("").empty());
  REQUIRE(detail::tokenize_line(" .. !! ").empty());
}

TEST_CASE("ingest assigns ids in first-appearance order") {
  TempDir dir("ingest");
  write_text(dir.file("a.txt"), "b c a\nc c d\n");
  Corpus corpus = ingest({dir.file("a.txt")});
  REQUIRE(corpus.n_docs() == 2);
  REQUIRE(corpus.vocab_size() == 4);
  REQUIRE(corpus.vocab.word(0) == "b");
  REQUIRE(corpus.vocab.word(1) == "c");
  REQUIRE(corpus.vocab.word(2) == "a");
  REQUIRE(corpus.vocab.word(3) == "d");
  REQUIRE(corpus.docs[0] == std::vector<word_id>{0, 1, 2});
  REQUIRE(corpus.docs[1] == std::vector<word_id>{1, 1, 3});
  REQUIRE(corpus.word_freq == std::vector<std::int64_t>{1, 3, 1, 1});
  REQUIRE(corpus.n_tokens == 6);
  REQUIRE(corpus.n_empty_docs == 0);
}

TEST_CASE("ingest concatenates multiple files in order") {
  TempDir dir("multi");
  write_text(dir.file("a.txt"), "x y\n");
  write_text(dir.file("b.txt"), "y z\n");
  Corpus corpus = ingest({dir.file("a.txt"), dir.file("b.txt")});
  REQUIRE(corpus.n_docs() == 2);
  REQUIRE(corpus.vocab.word(0) == "x");
  REQUIRE(corpus.vocab.word(1) == "y");
  REQUIRE(corpus.vocab.word(2) == "z");
}

TEST_CASE("ingest handles CRLF line endings") {
  TempDir dir("crlf");
  write_text(dir.file("a.txt"), "one two\r\nthree\r\n");
  Corpus corpus = ingest({dir.file("a.txt")});
  REQUIRE(corpus.n_docs() == 2);
  REQUIRE(corpus.vocab.id_of("three") >= 0);
  REQUIRE(corpus.vocab.id_of("three\r") == -1);
}

TEST_CASE("stopwords are removed before frequency counting") {
  TempDir dir("stop");
  write_text(dir.file("a.txt"), "the cat the mat\nthe dog\n");
  std::unordered_set<std::string> stops{"the"};
  Corpus corpus = ingest({dir.file("a.txt")}, &stops);
  REQUIRE(corpus.vocab.id_of("the") == -1);
  REQUIRE(corpus.n_tokens == 3);
}

TEST_CASE("stopword file applies the same normalization") {
  TempDir dir("stopfile");
  write_text(dir.file("stops.txt"), "The\nAND!\n\n");
  auto stops = load_stopwords(dir.file("stops.txt"));
  REQUIRE(stops.count("the") == 1);
  REQUIRE(stops.count("and") == 1);
  REQUIRE(stops.size() == 2);
}

TEST_CASE("min_count drops rare words after stopword removal") {
  TempDir dir("minc");
  write_text(dir.file("a.txt"), "a a a b b c\n");
  Corpus corpus = ingest({dir.file("a.txt")}, nullptr, 2);
  REQUIRE(corpus.vocab.id_of("a") >= 0);
  REQUIRE(corpus.vocab.id_of("b") >= 0);
  REQUIRE(corpus.vocab.id_of("c") == -1);
  REQUIRE(corpus.n_tokens == 5);
}

TEST_CASE("documents emptied by filtering stay in place") {
  TempDir dir("empty");
  write_text(dir.file("a.txt"), "rare\nkeep keep\n");
  Corpus corpus = ingest({dir.file("a.txt")}, nullptr, 2);
  REQUIRE(corpus.n_docs() == 2);
  REQUIRE(corpus.docs[0].empty());
  REQUIRE(corpus.n_empty_docs == 1);
}

TEST_CASE("empty vocabulary is a configuration error") {
  TempDir dir("emptyvocab");
  write_text(dir.file("a.txt"), "only\n");
  std::unordered_set<std::string> stops{"only"};
  try {
    ingest({dir.file("a.txt")}, &stops);
    FAIL("expected error");
  } catch (const error& e) {
    REQUIRE(e.kind() == error_kind::config);
  }
}

TEST_CASE("unreadable corpus file is an ingest error naming the path") {
  try {
    ingest({"/no/such/file.txt"});
    FAIL("expected error");
  } catch (const error& e) {
    REQUIRE(e.kind() == error_kind::ingest);
    REQUIRE(std::string(e.what()).find("/no/such/file.txt") != std::string::npos);
  }
}

TEST_CASE("corpus save/load round-trips ids, counts, and documents") {
  TempDir dir("roundtrip");
  write_text(dir.file("a.txt"), "b c a\nc c d\n\na b\n");
  Corpus corpus = ingest({dir.file("a.txt")});
  REQUIRE(corpus.n_empty_docs == 1);

  save_corpus(corpus, dir.file("corpus.txt"));
  Corpus loaded = load_corpus(dir.file("corpus.txt"));

  REQUIRE(loaded.docs == corpus.docs);
  REQUIRE(loaded.vocab.id_to_word == corpus.vocab.id_to_word);
  REQUIRE(loaded.word_freq == corpus.word_freq);
  REQUIRE(loaded.n_tokens == corpus.n_tokens);
  REQUIRE(loaded.n_empty_docs == corpus.n_empty_docs);

  // A second serialization of the loaded corpus is byte-identical.
  std::ostringstream first, second;
  save_corpus(corpus, first);
  save_corpus(loaded, second);
  REQUIRE(first.str() == second.str());
}

TEST_CASE("load_corpus rejects truncated files with a line number") {
  TempDir dir("trunc");
  write_text(dir.file("c.txt"), "2 3 4\n0 x 2\n1 y 2\n0 1\n");  // promises 3 docs, has 1
  try {
    load_corpus(dir.file("c.txt"));
    FAIL("expected error");
  } catch (const error& e) {
    REQUIRE(e.kind() == error_kind::parse);
    REQUIRE(std::string(e.what()).find("truncated") != std::string::npos);
  }
}

TEST_CASE("load_corpus rejects out-of-range token ids") {
  TempDir dir("range");
  write_text(dir.file("c.txt"), "1 1 2\n0 x 2\n0 7\n");
  REQUIRE_THROWS_AS(load_corpus(dir.file("c.txt")), error);
}

TEST_CASE("load_corpus cross-checks header token count") {
  TempDir dir("tokcount");
  write_text(dir.file("c.txt"), "1 1 5\n0 x 5\n0 0\n");  // header says 5 tokens, doc has 2
  try {
    load_corpus(dir.file("c.txt"));
    FAIL("expected error");
  } catch (const error& e) {
    REQUIRE(e.kind() == error_kind::parse);
    REQUIRE(std::string(e.what()).find("token count") != std::string::npos);
  }
}

TEST_CASE("load_corpus cross-checks vocabulary frequencies") {
  TempDir dir("freqcheck");
  write_text(dir.file("c.txt"), "2 1 2\n0 x 1\n1 y 1\n0 0\n");  // doc uses x twice, y never
  try {
    load_corpus(dir.file("c.txt"));
    FAIL("expected error");
  } catch (const error& e) {
    REQUIRE(e.kind() == error_kind::parse);
    REQUIRE(std::string(e.what()).find("frequencies") != std::string::npos);
  }
}

TEST_CASE("empty input file yields a configuration error") {
  TempDir dir("emptyfile");
  write_text(dir.file("a.txt"), "");
  REQUIRE_THROWS_AS(ingest({dir.file("a.txt")}), error);
}
