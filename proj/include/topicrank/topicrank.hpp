#pragma once

// Umbrella header: the whole toolkit in one include.

#include "topicrank/config.hpp"
#include "topicrank/corpus.hpp"
#include "topicrank/docfreq.hpp"
#include "topicrank/errors.hpp"
#include "topicrank/eval.hpp"
#include "topicrank/io_util.hpp"
#include "topicrank/lda.hpp"
#include "topicrank/log.hpp"
#include "topicrank/model_io.hpp"
#include "topicrank/pipeline.hpp"
#include "topicrank/rerank.hpp"
#include "topicrank/rng.hpp"
