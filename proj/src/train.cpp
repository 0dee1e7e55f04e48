#include "hieroclf/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "hieroclf/metric.hpp"

namespace hieroclf::nn {

namespace {

std::vector<Example> encode_corpus(const Corpus& corpus,
                                   const Vocabulary& vocab, OovPolicy oov) {
  std::vector<Example> examples;
  examples.reserve(corpus.size());
  for (const DataPoint& p : corpus.points) {
    examples.push_back({encode(vocab, p.signs, oov), p.labels});
  }
  return examples;
}

double global_norm(const Params<float>& grads) {
  double sum = 0;
  grads.for_each_tensor([&](std::string_view, const Matrix<float>& m) {
    sum += m.template cast<double>().squaredNorm();
  });
  return std::sqrt(sum);
}

void apply_update(Params<float>& params, const Params<float>& grads,
                  float step) {
  auto it_apply = [&](auto& self, const auto& other) {
    // Tensors visited in the same declared order on both sides.
    std::vector<Matrix<float>*> mine;
    self.for_each_tensor(
        [&](std::string_view, Matrix<float>& m) { mine.push_back(&m); });
    std::size_t i = 0;
    other.for_each_tensor([&](std::string_view, const Matrix<float>& g) {
      *mine[i] -= step * g;
      ++i;
    });
  };
  it_apply(params, grads);
}

}  // namespace

double evaluate_model(const Params<float>& params, const ModelConfig& cfg,
                      const Vocabulary& vocab, const Corpus& corpus,
                      DecodeMode mode, OovPolicy oov) {
  std::vector<std::vector<int>> predictions;
  predictions.reserve(corpus.size());
  for (const DataPoint& p : corpus.points) {
    auto ids = encode(vocab, p.signs, oov);
    predictions.push_back(
        predict(params, cfg, ids, p.signs.size(), mode));
  }
  return score(corpus, predictions).mean_errors_per_point;
}

TrainResult train(const Corpus& train_corpus, const Corpus& dev_corpus,
                  ModelConfig cfg, const TrainConfig& tcfg) {
  if (train_corpus.points.empty() || dev_corpus.points.empty()) {
    throw std::invalid_argument("train and dev corpora must be non-empty");
  }
  if (tcfg.patience < 1 || tcfg.max_epochs < 1 || tcfg.batch_size < 1 ||
      tcfg.learning_rate <= 0) {
    throw std::invalid_argument("bad training configuration");
  }

  Vocabulary vocab = build_vocab(train_corpus, cfg.kind);
  cfg.vocab_size = vocab.size();

  Rng rng(tcfg.seed);
  Params<float> params = init_params<float>(cfg, rng);

  std::vector<Example> examples = encode_corpus(train_corpus, vocab, tcfg.oov);

  TrainResult result{cfg, params, vocab, {}, 0, 0.0};
  double best = 0.0;
  bool has_best = false;
  int since_improvement = 0;

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= tcfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0;
    long batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(tcfg.batch_size)) {
      std::size_t end = std::min(
          order.size(), start + static_cast<std::size_t>(tcfg.batch_size));
      std::vector<Example> batch;
      batch.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(examples[order[i]]);
      }
      std::pair<float, Params<float>> step;
      try {
        step = loss_and_gradients<float>(params, cfg, batch);
      } catch (const NonFiniteError& e) {
        std::ostringstream msg;
        msg << e.what() << " (diverged at learning rate " << tcfg.learning_rate
            << ", epoch " << epoch << ")";
        throw NonFiniteError(msg.str());
      }
      auto& [loss, grads] = step;
      if (tcfg.clip_norm > 0) {
        double norm = global_norm(grads);
        if (norm > tcfg.clip_norm) {
          float scale = static_cast<float>(tcfg.clip_norm / norm);
          grads.for_each_tensor(
              [&](std::string_view, Matrix<float>& m) { m *= scale; });
        }
      }
      apply_update(params, grads, static_cast<float>(tcfg.learning_rate));
      loss_sum += static_cast<double>(loss);
      ++batches;
    }

    double dev_error = evaluate_model(params, cfg, vocab, dev_corpus,
                                      tcfg.dev_decode, tcfg.oov);
    result.history.push_back(
        {epoch, loss_sum / static_cast<double>(batches), dev_error});

    if (!has_best || dev_error < best) {
      best = dev_error;
      has_best = true;
      since_improvement = 0;
      result.params = params;
      result.best_epoch = epoch;
      result.best_dev_error = dev_error;
    } else {
      ++since_improvement;
      if (since_improvement >= tcfg.patience) break;
    }
  }
  return result;
}

TrainConfig grid_search(const Corpus& train_corpus, const Corpus& dev_corpus,
                        const ModelConfig& cfg, const TrainConfig& base) {
  if (base.grid_batch_sizes.empty() || base.grid_learning_rates.empty()) {
    throw std::invalid_argument("grid search needs a non-empty grid");
  }
  std::vector<double> rates = base.grid_learning_rates;
  std::vector<int> batches = base.grid_batch_sizes;
  std::sort(rates.begin(), rates.end());
  std::sort(batches.begin(), batches.end());

  TrainConfig best = base;
  double best_error = 0;
  bool found = false;
  for (double lr : rates) {
    for (int bs : batches) {
      TrainConfig cell = base;
      cell.learning_rate = lr;
      cell.batch_size = bs;
      try {
        TrainResult run = train(train_corpus, dev_corpus, cfg, cell);
        if (!found || run.best_dev_error < best_error) {
          best = cell;
          best_error = run.best_dev_error;
          found = true;
        }
      } catch (const NonFiniteError&) {
        // diverging cell; excluded from the comparison
      }
    }
  }
  if (!found) {
    throw NonFiniteError("every grid cell diverged");
  }
  return best;
}

std::string history_text(const TrainResult& result, const TrainConfig& tcfg) {
  std::ostringstream out;
  out << "# hieroclf train history v1\n";
  out << "# kind = " << vocab_kind_name(result.config.kind) << '\n';
  out << "# layers = " << result.config.layers << '\n';
  out << "# hidden = " << result.config.hidden << '\n';
  out << "# embedding_dim = " << result.config.embedding_dim << '\n';
  out << "# vocab_size = " << result.config.vocab_size << '\n';
  out << "# batch_size = " << tcfg.batch_size << '\n';
  out << "# learning_rate = " << tcfg.learning_rate << '\n';
  out << "# patience = " << tcfg.patience << '\n';
  out << "# max_epochs = " << tcfg.max_epochs << '\n';
  out << "# seed = " << tcfg.seed << '\n';
  out << "# clip_norm = " << tcfg.clip_norm << '\n';
  out << "# best_epoch = " << result.best_epoch << '\n';
  out << "epoch\ttrain_loss\tdev_error\n";
  out << std::fixed << std::setprecision(6);
  for (const EpochStats& e : result.history) {
    out << e.epoch << '\t' << e.train_loss << '\t' << e.dev_error << '\n';
  }
  return out.str();
}

}  // namespace hieroclf::nn
