#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hieroclf/corpus.hpp"
#include "hieroclf/nn/seq2seq.hpp"
#include "hieroclf/vocab.hpp"

namespace hieroclf::nn {

struct TrainConfig {
  int batch_size = 32;
  double learning_rate = 0.1;
  int patience = 5;
  int max_epochs = 200;
  std::uint64_t seed = 0;
  double clip_norm = 5.0;  // global gradient norm; 0 disables clipping
  OovPolicy oov = OovPolicy::map_to_unk;
  DecodeMode dev_decode = DecodeMode::free;
  std::vector<int> grid_batch_sizes = {16, 32, 64};
  std::vector<double> grid_learning_rates = {0.1, 0.03, 0.01};
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_error = 0.0;
};

struct TrainResult {
  ModelConfig config;
  Params<float> params;
  Vocabulary vocab;
  std::vector<EpochStats> history;
  int best_epoch = 0;
  double best_dev_error = 0.0;
};

/// Mean sign errors per data point of greedy decoding over a corpus.
double evaluate_model(const Params<float>& params, const ModelConfig& cfg,
                      const Vocabulary& vocab, const Corpus& corpus,
                      DecodeMode mode, OovPolicy oov);

/// Mini-batch gradient descent with early stopping: after each epoch the dev
/// metric is computed; training stops once it has not strictly improved for
/// `patience` epochs (or at max_epochs) and the best-dev parameters are
/// returned. Deterministic given the seed. The vocabulary is built from the
/// training corpus according to cfg.kind; cfg.vocab_size is derived from it.
TrainResult train(const Corpus& train_corpus, const Corpus& dev_corpus,
                  ModelConfig cfg, const TrainConfig& tcfg);

/// One training run per (batch size, learning rate) cell; returns the config
/// of the cell with the best dev metric. Ties prefer the lower learning rate,
/// then the smaller batch; diverging cells (non-finite loss) are skipped.
TrainConfig grid_search(const Corpus& train_corpus, const Corpus& dev_corpus,
                        const ModelConfig& cfg, const TrainConfig& base);

/// History as structured text with the resolved configuration echoed in
/// comment lines.
std::string history_text(const TrainResult& result, const TrainConfig& tcfg);

}  // namespace hieroclf::nn
