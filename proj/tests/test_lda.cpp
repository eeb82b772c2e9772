#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "topicrank/lda.hpp"
#include "topicrank/model_io.hpp"

using namespace topicrank;
using testutil::make_corpus;
using testutil::planted_two_topics;
using testutil::random_corpus;
using testutil::TempDir;

namespace {

LdaConfig config_of(topic_id K, double alpha, double beta, std::int32_t iters,
                    std::uint64_t seed) {
  LdaConfig c;
  c.K = K;
  c.alpha = alpha;
  c.beta = beta;
  c.n_iters = iters;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("config validation rejects degenerate settings") {
  REQUIRE_THROWS_AS(config_of(0, 0.1, 0.1, 10, 1).validate(), error);
  REQUIRE_THROWS_AS(config_of(2, 0.0, 0.1, 10, 1).validate(), error);
  REQUIRE_THROWS_AS(config_of(2, 0.1, -1.0, 10, 1).validate(), error);
  REQUIRE_THROWS_AS(config_of(2, 0.1, 0.1, 0, 1).validate(), error);
  REQUIRE_NOTHROW(config_of(2, 0.1, 0.1, 1, 1).validate());
}

TEST_CASE("defaults follow the usual prior heuristics") {
  LdaConfig c = LdaConfig::defaults(50, 7);
  REQUIRE(c.K == 50);
  REQUIRE(c.alpha == Catch::Approx(1.0));
  REQUIRE(c.beta == Catch::Approx(0.01));
  REQUIRE(c.n_iters == 500);
  REQUIRE(c.seed == 7);
}

// Worked conditional, fully excluded counts:
//   V=2, K=2, alpha=0.3, beta=0.7
//   docs: d0=[w0,w1], d1=[w1,w1]; z: d0=[1,0], d1=[1,0]
//   resampling (d=0,n=0), a w0 token currently in topic 1.
// Excluding it: N_0={w1:2}, N_1={w1:1}; doc0 residual: k0 once.
//   p(0) prop (0+0.7)(1+0.3)/(2+1.4),  p(1) prop (0+0.7)(0+0.3)/(1+1.4)
// which normalizes to exactly [52/69, 17/69].
TEST_CASE("collapsed conditional matches the hand-computed micro case") {
  Corpus corpus = make_corpus({{0, 1}, {1, 1}}, 2);
  LdaConfig config = config_of(2, 0.3, 0.7, 1, 1);
  GibbsState state = state_from_assignments(corpus, config, {{1, 0}, {1, 0}});

  auto p = token_conditional(state, corpus, config, 0, 0);
  REQUIRE(p.size() == 2);
  REQUIRE(p[0] == Catch::Approx(52.0 / 69.0).epsilon(1e-13));
  REQUIRE(p[1] == Catch::Approx(17.0 / 69.0).epsilon(1e-13));
}

TEST_CASE("resampling draws from the conditional (Monte Carlo)") {
  Corpus corpus = make_corpus({{0, 1}, {1, 1}}, 2);
  LdaConfig config = config_of(2, 0.3, 0.7, 1, 1);
  GibbsState base = state_from_assignments(corpus, config, {{1, 0}, {1, 0}});
  base.gen = rng(2024);

  const int trials = 100000;
  int topic0 = 0;
  GibbsState state = base;
  for (int t = 0; t < trials; ++t) {
    // Restore the token and reuse the advanced stream so draws are i.i.d.
    rng stream = state.gen;
    state = base;
    state.gen = stream;
    resample_token(state, corpus, config, 0, 0);
    if (state.z[0][0] == 0) ++topic0;
  }
  const double p = 52.0 / 69.0;
  const double freq = static_cast<double>(topic0) / trials;
  const double sigma = std::sqrt(p * (1.0 - p) / trials);
  REQUIRE(std::abs(freq - p) < 3.0 * sigma);
}

// Second worked case: docs=[[w0,w1,w0]], z=[[0,1,1]], alpha=0.5, beta=1.0.
// Resampling token 0 (w0, topic 0): excluded counts leave everything in
// topic 1, and the conditional is exactly [1/6, 5/6].
TEST_CASE("second hand-computed conditional") {
  Corpus corpus = make_corpus({{0, 1, 0}}, 2);
  LdaConfig config = config_of(2, 0.5, 1.0, 1, 1);
  GibbsState state = state_from_assignments(corpus, config, {{0, 1, 1}});
  auto p = token_conditional(state, corpus, config, 0, 0);
  REQUIRE(p[0] == Catch::Approx(1.0 / 6.0).epsilon(1e-13));
  REQUIRE(p[1] == Catch::Approx(5.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("K=1 assigns everything to topic 0 and stays consistent") {
  Corpus corpus = make_corpus({{0, 1}, {1, 0, 1}}, 2);
  LdaConfig config = config_of(1, 0.5, 0.5, 3, 9);
  GibbsState state = init_state(corpus, config);
  for (const auto& zd : state.z)
    for (topic_id k : zd) REQUIRE(k == 0);
  sweep(state, corpus, config);
  validate_state(state, corpus);
  auto p = token_conditional(state, corpus, config, 0, 0);
  REQUIRE(p == std::vector<double>{1.0});
}

TEST_CASE("init_state builds counts that match its assignments") {
  Corpus corpus = random_corpus(30, 20, 15, 3);
  LdaConfig config = config_of(4, 0.3, 0.05, 1, 11);
  GibbsState state = init_state(corpus, config);
  REQUIRE(state.n_tokens == corpus.n_tokens);
  REQUIRE(state.iter_done == 0);
  validate_state(state, corpus);
}

TEST_CASE("init_state rejects an empty corpus") {
  Corpus corpus;
  corpus.vocab.add("w");
  corpus.word_freq.assign(1, 0);
  LdaConfig config = config_of(2, 0.1, 0.1, 1, 1);
  REQUIRE_THROWS_AS(init_state(corpus, config), error);
}

TEST_CASE("counts stay exactly conserved across sweeps") {
  Corpus corpus = random_corpus(40, 30, 20, 5);
  LdaConfig config = config_of(3, 0.4, 0.02, 1, 17);
  GibbsState state = init_state(corpus, config);
  for (int i = 0; i < 10; ++i) {
    sweep(state, corpus, config);
    validate_state(state, corpus);  // throws on any drift
  }
  REQUIRE(state.iter_done == 10);
}

TEST_CASE("training is deterministic in the seed") {
  Corpus corpus = random_corpus(25, 15, 12, 8);
  LdaConfig config = config_of(3, 0.4, 0.02, 20, 123);
  auto [state_a, phi_a] = train(corpus, config);
  auto [state_b, phi_b] = train(corpus, config);
  REQUIRE(state_a.z == state_b.z);
  REQUIRE(state_a.word_topic == state_b.word_topic);
  REQUIRE(phi_a.scores == phi_b.scores);

  LdaConfig other = config;
  other.seed = 124;
  auto [state_c, phi_c] = train(corpus, other);
  REQUIRE(state_a.z != state_c.z);
}

TEST_CASE("phi rows are normalized and follow the count formula") {
  Corpus corpus = make_corpus({{0, 1, 2}, {2, 2}}, 3);
  LdaConfig config = config_of(2, 0.2, 0.5, 1, 1);
  GibbsState state = state_from_assignments(corpus, config, {{0, 1, 0}, {1, 1}});
  TopicWordMatrix phi = estimate_phi(state, config);

  // N_0 = {w0:1, w2:1}, N_1 = {w1:1, w2:2}; V*beta = 1.5.
  REQUIRE(phi.at(0, 0) == Catch::Approx((1 + 0.5) / (2 + 1.5)).epsilon(1e-13));
  REQUIRE(phi.at(0, 1) == Catch::Approx(0.5 / 3.5).epsilon(1e-13));
  REQUIRE(phi.at(1, 2) == Catch::Approx((2 + 0.5) / (3 + 1.5)).epsilon(1e-13));
  for (topic_id k = 0; k < 2; ++k) {
    double sum = 0.0;
    for (word_id v = 0; v < 3; ++v) sum += phi.at(k, v);
    REQUIRE(sum == Catch::Approx(1.0).epsilon(1e-12));
  }
  REQUIRE(phi.counts);
  REQUIRE(phi.counts->total == corpus.n_tokens);
}

TEST_CASE("planted two-topic corpus separates cleanly") {
  Corpus corpus = planted_two_topics(50, 30, 77);
  LdaConfig config = config_of(2, 0.5, 0.01, 100, 1);
  auto [state, phi] = train(corpus, config);

  // Majority topic of each side's tokens; demand >= 95% purity.
  std::int64_t side0_in[2] = {0, 0}, side1_in[2] = {0, 0};
  for (std::size_t d = 0; d < state.z.size(); ++d) {
    for (std::size_t n = 0; n < state.z[d].size(); ++n) {
      topic_id k = state.z[d][n];
      if (corpus.docs[d][n] < 10)
        ++side0_in[k];
      else
        ++side1_in[k];
    }
  }
  topic_id major0 = side0_in[0] >= side0_in[1] ? 0 : 1;
  topic_id major1 = 1 - major0;
  double total0 = static_cast<double>(side0_in[0] + side0_in[1]);
  double total1 = static_cast<double>(side1_in[0] + side1_in[1]);
  REQUIRE(static_cast<double>(side0_in[major0]) / total0 > 0.95);
  REQUIRE(static_cast<double>(side1_in[major1]) / total1 > 0.95);

  // And phi concentrates each side's words in its majority topic.
  for (word_id v = 0; v < 10; ++v) REQUIRE(phi.at(major0, v) > phi.at(major1, v));
  for (word_id v = 10; v < 20; ++v) REQUIRE(phi.at(major1, v) > phi.at(major0, v));
}

TEST_CASE("model save/load round-trips the full sampler state") {
  TempDir dir("model");
  Corpus corpus = random_corpus(20, 10, 8, 2);
  LdaConfig config = config_of(3, 0.4, 0.02, 5, 31);
  auto [state, phi] = train(corpus, config);

  save_model(state, config, dir.file("model.txt"));
  auto [loaded, loaded_config] = load_model(dir.file("model.txt"), corpus);

  REQUIRE(loaded.z == state.z);
  REQUIRE(loaded.word_topic == state.word_topic);
  REQUIRE(loaded.doc_topic == state.doc_topic);
  REQUIRE(loaded.topic_total == state.topic_total);
  REQUIRE(loaded.iter_done == state.iter_done);
  REQUIRE(loaded.gen == state.gen);
  REQUIRE(loaded_config.K == config.K);
  REQUIRE(loaded_config.alpha == config.alpha);
  REQUIRE(loaded_config.beta == config.beta);
  REQUIRE(loaded_config.seed == config.seed);

  // Saving the loaded state reproduces the file byte for byte.
  std::ostringstream again, original;
  save_model(state, config, original);
  save_model(loaded, loaded_config, again);
  REQUIRE(again.str() == original.str());
}

TEST_CASE("save/load/resume equals an uninterrupted run") {
  TempDir dir("resume");
  Corpus corpus = random_corpus(30, 20, 10, 6);
  LdaConfig config = config_of(4, 0.3, 0.05, 20, 55);

  auto [full, phi_full] = train(corpus, config);

  LdaConfig half = config;
  half.n_iters = 10;
  auto [part, phi_part] = train(corpus, half);
  save_model(part, half, dir.file("half.txt"));
  auto [resumed, resumed_config] = load_model(dir.file("half.txt"), corpus);
  resumed_config.n_iters = config.n_iters;
  run_sweeps(resumed, corpus, resumed_config, 10);

  REQUIRE(resumed.z == full.z);
  REQUIRE(resumed.word_topic == full.word_topic);
  REQUIRE(resumed.topic_total == full.topic_total);
  REQUIRE(resumed.gen == full.gen);
  REQUIRE(resumed.iter_done == full.iter_done);

  std::ostringstream a, b;
  save_model(full, config, a);
  save_model(resumed, resumed_config, b);
  REQUIRE(a.str() == b.str());
}

TEST_CASE("load_model rejects a mismatched corpus") {
  TempDir dir("mismatch");
  Corpus corpus = random_corpus(20, 10, 8, 2);
  LdaConfig config = config_of(2, 0.4, 0.02, 2, 3);
  auto [state, phi] = train(corpus, config);
  save_model(state, config, dir.file("m.txt"));

  Corpus other = random_corpus(21, 10, 8, 2);  // different V
  try {
    load_model(dir.file("m.txt"), other);
    FAIL("expected error");
  } catch (const error& e) {
    REQUIRE(e.kind() == error_kind::parse);
  }
}

TEST_CASE("load_model rejects an unknown rng name and truncation") {
  TempDir dir("corrupt");
  Corpus corpus = random_corpus(15, 8, 6, 4);
  LdaConfig config = config_of(2, 0.4, 0.02, 2, 3);
  auto [state, phi] = train(corpus, config);
  std::ostringstream os;
  save_model(state, config, os);
  const std::string good = os.str();

  SECTION("rng name") {
    std::string bad = good;
    auto pos = bad.find("mt19937_64");
    bad.replace(pos, 10, "other_rng0");
    testutil::write_text(dir.file("bad.txt"), bad);
    try {
      load_model(dir.file("bad.txt"), corpus);
      FAIL("expected error");
    } catch (const error& e) {
      REQUIRE(e.kind() == error_kind::parse);
      REQUIRE(std::string(e.what()).find("other_rng0") != std::string::npos);
    }
  }

  SECTION("missing rng_state line") {
    std::string bad = good.substr(0, good.rfind("rng_state"));
    testutil::write_text(dir.file("bad.txt"), bad);
    REQUIRE_THROWS_AS(load_model(dir.file("bad.txt"), corpus), error);
  }

  SECTION("truncated documents") {
    // Drop the last two lines (one z line and the rng_state line).
    std::string bad = good;
    bad.pop_back();
    bad = bad.substr(0, bad.rfind('\n'));
    bad = bad.substr(0, bad.rfind('\n') + 1);
    testutil::write_text(dir.file("bad.txt"), bad);
    REQUIRE_THROWS_AS(load_model(dir.file("bad.txt"), corpus), error);
  }
}

TEST_CASE("sweep throughput is logged and state advances") {
  Corpus corpus = random_corpus(10, 5, 5, 1);
  LdaConfig config = config_of(2, 0.5, 0.1, 3, 2);
  GibbsState state = init_state(corpus, config);
  run_sweeps(state, corpus, config, 3);
  REQUIRE(state.iter_done == 3);
}
