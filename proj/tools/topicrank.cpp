// topicrank: train LDA topic models and rerank/evaluate their top-word
// representations. Subcommands wire the library stages together; every
// command is deterministic given its inputs and seed.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topicrank/topicrank.hpp"

namespace {

topicrank::LdaConfig make_lda_config(topicrank::topic_id K, double alpha, double beta,
                                     std::int32_t iters, std::uint64_t seed) {
  topicrank::LdaConfig config = topicrank::LdaConfig::defaults(K, seed);
  if (alpha > 0.0) config.alpha = alpha;
  if (beta > 0.0) config.beta = beta;
  config.n_iters = iters;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LDA topic modeling with reranked top-word representations"};
  app.require_subcommand(1);

  // ingest
  auto* ing = app.add_subcommand("ingest", "Tokenize text files into a corpus file");
  topicrank::IngestArgs ingest_args;
  ing->add_option("--corpus", ingest_args.corpus_paths,
                  "input text file(s), one document per line")
      ->required();
  ing->add_option("--stopwords", ingest_args.stopword_path, "stopword list, one word per line");
  ing->add_option("--min-count", ingest_args.min_count,
                  "drop words with corpus frequency below this")
      ->default_val(1);
  ing->add_option("--out", ingest_args.out_path, "output corpus file")->required();
  ing->callback([&] { topicrank::cmd_ingest(ingest_args); });

  // train
  auto* tr = app.add_subcommand("train", "Train an LDA model by collapsed Gibbs sampling");
  std::string train_corpus, train_model;
  topicrank::topic_id train_topics = 0;
  double train_alpha = 0.0, train_beta = 0.0;  // 0 = use default (50/K, 0.01)
  std::int32_t train_iters = 500, train_chains = 1;
  std::uint64_t train_seed = 1;
  tr->add_option("--corpus", train_corpus, "corpus file from `ingest`")->required();
  tr->add_option("--topics", train_topics, "number of topics K")->required();
  tr->add_option("--alpha", train_alpha, "document-topic prior (default 50/K)");
  tr->add_option("--beta", train_beta, "topic-word prior (default 0.01)");
  tr->add_option("--iters", train_iters, "Gibbs sweeps")->default_val(500);
  tr->add_option("--seed", train_seed, "RNG seed")->default_val(1);
  tr->add_option("--model", train_model, "output model file")->required();
  tr->add_option("--chains", train_chains,
                 "independent chains run concurrently with seeds seed, seed+1, ...; "
                 "chain c writes <model>.chain<c> when more than one")
      ->default_val(1);
  tr->callback([&] {
    topicrank::TrainArgs args;
    args.corpus_path = train_corpus;
    args.config = make_lda_config(train_topics, train_alpha, train_beta, train_iters, train_seed);
    args.model_path = train_model;
    args.chains = train_chains;
    topicrank::cmd_train(args);
  });

  // topics
  auto* tp = app.add_subcommand("topics", "Write top-m word lists per topic and method (TSV)");
  std::string tp_model, tp_corpus, tp_methods = "norm,sdw,sdwts,chi", tp_out;
  topicrank::word_id tp_top_m = 10;
  tp->add_option("--model", tp_model, "model file from `train`")->required();
  tp->add_option("--corpus", tp_corpus, "corpus file the model was trained on")->required();
  tp->add_option("--methods", tp_methods, "comma-separated subset of norm,sdw,sdwts,chi")
      ->default_val("norm,sdw,sdwts,chi");
  tp->add_option("--top-m", tp_top_m, "list length")->default_val(10);
  tp->add_option("--out", tp_out, "output file (default stdout)");
  tp->callback([&] {
    topicrank::TopicsArgs args;
    args.model_path = tp_model;
    args.corpus_path = tp_corpus;
    args.methods = topicrank::parse_method_list(tp_methods);
    args.top_m = tp_top_m;
    args.out_path = tp_out;
    topicrank::cmd_topics(args);
  });

  // coherence
  auto* co = app.add_subcommand("coherence", "Score per-topic coherence of top-m lists (CSV)");
  std::string co_model, co_corpus, co_methods = "norm,sdw,sdwts,chi", co_out;
  topicrank::word_id co_top_m = 10;
  double co_epsilon = 1.0;
  co->add_option("--model", co_model, "model file from `train`")->required();
  co->add_option("--corpus", co_corpus, "corpus file the model was trained on")->required();
  co->add_option("--methods", co_methods, "comma-separated subset of norm,sdw,sdwts,chi")
      ->default_val("norm,sdw,sdwts,chi");
  co->add_option("--top-m", co_top_m, "list length")->default_val(10);
  co->add_option("--epsilon", co_epsilon, "smoothing constant inside the logs")->default_val(1.0);
  co->add_option("--out", co_out, "output file (default stdout)");
  co->callback([&] {
    topicrank::CoherenceArgs args;
    args.model_path = co_model;
    args.corpus_path = co_corpus;
    args.methods = topicrank::parse_method_list(co_methods);
    args.top_m = co_top_m;
    args.epsilon = co_epsilon;
    args.out_path = co_out;
    topicrank::cmd_coherence(args);
  });

  // intrude
  auto* in = app.add_subcommand("intrude", "Run the automated word-intrusion benchmark (CSV)");
  std::string in_model, in_corpus, in_methods = "norm,sdw,sdwts,chi";
  std::string in_pattern = "s_voc,s_topic,s_self", in_out;
  std::int32_t in_repeats = 10;
  double in_epsilon = 1.0;
  std::uint64_t in_seed = 1;
  in->add_option("--model", in_model, "model file from `train`")->required();
  in->add_option("--corpus", in_corpus, "corpus file the model was trained on")->required();
  in->add_option("--methods", in_methods, "comma-separated subset of norm,sdw,sdwts,chi")
      ->default_val("norm,sdw,sdwts,chi");
  in->add_option("--pattern", in_pattern,
                 "comma-separated subset of s_voc,s_topic,s_self (intruder pools)")
      ->default_val("s_voc,s_topic,s_self");
  in->add_option("--repeats", in_repeats, "task generations to average over")->default_val(10);
  in->add_option("--epsilon", in_epsilon, "smoothing constant in the detector")->default_val(1.0);
  in->add_option("--seed", in_seed, "base seed; repeat r uses seed+r")->default_val(1);
  in->add_option("--out", in_out, "output file (default stdout)");
  in->callback([&] {
    topicrank::IntrudeArgs args;
    args.model_path = in_model;
    args.corpus_path = in_corpus;
    args.methods = topicrank::parse_method_list(in_methods);
    args.patterns = topicrank::parse_pattern_list(in_pattern);
    args.repeats = in_repeats;
    args.epsilon = in_epsilon;
    args.seed = in_seed;
    args.out_path = in_out;
    topicrank::cmd_intrude(args);
  });

  // repro
  auto* rp = app.add_subcommand(
      "repro", "Run a whole experiment from a config file (ingest, train, rank, evaluate)");
  std::string rp_config;
  rp->add_option("config", rp_config, "key=value experiment config file")->required();
  rp->callback([&] { topicrank::cmd_repro(rp_config); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const topicrank::error& e) {
    std::fprintf(stderr, "error: %s: %s\n", topicrank::to_string(e.kind()), e.what());
    return e.kind() == topicrank::error_kind::ingest ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return 1;
  }
  return 0;
}
