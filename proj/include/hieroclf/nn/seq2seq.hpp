#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hieroclf/errors.hpp"
#include "hieroclf/metric.hpp"
#include "hieroclf/nn/lstm.hpp"
#include "hieroclf/rng.hpp"
#include "hieroclf/vocab.hpp"

namespace hieroclf::nn {

/// Fixed decoder-side vocabulary: sentence markers plus the two labels.
constexpr int kOutPad = 0;
constexpr int kOutSos = 1;
constexpr int kOutEos = 2;
constexpr int kOutZero = 3;
constexpr int kOutOne = 4;
constexpr int kOutputVocabSize = 5;

inline const char* output_token_text(int id) {
  constexpr const char* kTexts[kOutputVocabSize] = {"<pad>", "<sos>", "<eos>",
                                                    "0", "1"};
  return kTexts[id];
}

inline int label_to_output_id(int label) { return label ? kOutOne : kOutZero; }

struct ModelConfig {
  VocabKind kind = VocabKind::sign;
  int layers = 1;
  int hidden = 64;
  int embedding_dim = 32;
  int vocab_size = 0;  // input vocabulary, reserved ids included
};

/// All trainable tensors. `for_each_tensor` fixes the declared order used by
/// checkpoints, updates and the finite-difference check.
template <class Scalar>
struct Params {
  Matrix<Scalar> encoder_embedding;  // E x V
  Matrix<Scalar> decoder_embedding;  // E x 5
  std::vector<LstmLayer<Scalar>> encoder_layers;
  std::vector<LstmLayer<Scalar>> decoder_layers;
  Matrix<Scalar> output_weight;  // 5 x H
  Matrix<Scalar> output_bias;    // 5 x 1

  template <class Self, class F>
  static void visit(Self& self, F&& f) {
    f("encoder_embedding", self.encoder_embedding);
    f("decoder_embedding", self.decoder_embedding);
    for (std::size_t l = 0; l < self.encoder_layers.size(); ++l) {
      std::string p = "encoder_layer" + std::to_string(l) + ".";
      f(p + "w_input", self.encoder_layers[l].w_input);
      f(p + "w_recurrent", self.encoder_layers[l].w_recurrent);
      f(p + "bias", self.encoder_layers[l].bias);
    }
    for (std::size_t l = 0; l < self.decoder_layers.size(); ++l) {
      std::string p = "decoder_layer" + std::to_string(l) + ".";
      f(p + "w_input", self.decoder_layers[l].w_input);
      f(p + "w_recurrent", self.decoder_layers[l].w_recurrent);
      f(p + "bias", self.decoder_layers[l].bias);
    }
    f("output_weight", self.output_weight);
    f("output_bias", self.output_bias);
  }

  template <class F>
  void for_each_tensor(F&& f) {
    visit(*this, std::forward<F>(f));
  }
  template <class F>
  void for_each_tensor(F&& f) const {
    visit(*this, std::forward<F>(f));
  }
};

namespace detail {

template <class Scalar>
std::vector<LstmLayer<Scalar>> make_stack(int layers, int input_dim,
                                          int hidden) {
  std::vector<LstmLayer<Scalar>> stack;
  for (int l = 0; l < layers; ++l) {
    LstmLayer<Scalar> layer;
    int in = l == 0 ? input_dim : hidden;
    layer.w_input = Matrix<Scalar>::Zero(4 * hidden, in);
    layer.w_recurrent = Matrix<Scalar>::Zero(4 * hidden, hidden);
    layer.bias = Matrix<Scalar>::Zero(4 * hidden, 1);
    stack.push_back(std::move(layer));
  }
  return stack;
}

}  // namespace detail

template <class Scalar>
Params<Scalar> zero_params(const ModelConfig& cfg) {
  if (cfg.layers < 1 || cfg.hidden < 1 || cfg.embedding_dim < 1 ||
      cfg.vocab_size < Vocabulary::kReserved + 1) {
    throw DimensionError("model configuration out of range");
  }
  Params<Scalar> p;
  p.encoder_embedding =
      Matrix<Scalar>::Zero(cfg.embedding_dim, cfg.vocab_size);
  p.decoder_embedding =
      Matrix<Scalar>::Zero(cfg.embedding_dim, kOutputVocabSize);
  p.encoder_layers =
      detail::make_stack<Scalar>(cfg.layers, cfg.embedding_dim, cfg.hidden);
  p.decoder_layers =
      detail::make_stack<Scalar>(cfg.layers, cfg.embedding_dim, cfg.hidden);
  p.output_weight = Matrix<Scalar>::Zero(kOutputVocabSize, cfg.hidden);
  p.output_bias = Matrix<Scalar>::Zero(kOutputVocabSize, 1);
  return p;
}

/// Weights uniform in +-1/sqrt(fan_in), embeddings +-0.1, biases zero except
/// the forget-gate block at 1.
template <class Scalar>
Params<Scalar> init_params(const ModelConfig& cfg, Rng& rng) {
  Params<Scalar> p = zero_params<Scalar>(cfg);
  auto fill_uniform = [&](Matrix<Scalar>& m, double radius) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = static_cast<Scalar>(rng.uniform(-radius, radius));
    }
  };
  fill_uniform(p.encoder_embedding, 0.1);
  fill_uniform(p.decoder_embedding, 0.1);
  auto init_stack = [&](std::vector<LstmLayer<Scalar>>& stack) {
    for (auto& layer : stack) {
      fill_uniform(layer.w_input,
                   1.0 / std::sqrt(static_cast<double>(layer.input_dim())));
      fill_uniform(layer.w_recurrent,
                   1.0 / std::sqrt(static_cast<double>(layer.hidden())));
      layer.bias.setZero();
      layer.bias.col(0).segment(layer.hidden(), layer.hidden()).setOnes();
    }
  };
  init_stack(p.encoder_layers);
  init_stack(p.decoder_layers);
  fill_uniform(p.output_weight, 1.0 / std::sqrt(static_cast<double>(cfg.hidden)));
  p.output_bias.setZero();
  return p;
}

template <class Scalar>
Params<Scalar> init_params(const ModelConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  return init_params<Scalar>(cfg, rng);
}

template <class Scalar>
void validate_shapes(const Params<Scalar>& params, const ModelConfig& cfg) {
  bool ok = params.encoder_embedding.rows() == cfg.embedding_dim &&
            params.encoder_embedding.cols() == cfg.vocab_size &&
            params.decoder_embedding.rows() == cfg.embedding_dim &&
            params.decoder_embedding.cols() == kOutputVocabSize &&
            params.encoder_layers.size() ==
                static_cast<std::size_t>(cfg.layers) &&
            params.decoder_layers.size() ==
                static_cast<std::size_t>(cfg.layers) &&
            params.output_weight.rows() == kOutputVocabSize &&
            params.output_weight.cols() == cfg.hidden &&
            params.output_bias.rows() == kOutputVocabSize;
  for (const auto* stack : {&params.encoder_layers, &params.decoder_layers}) {
    for (std::size_t l = 0; ok && l < stack->size(); ++l) {
      const auto& layer = (*stack)[l];
      int in = l == 0 ? cfg.embedding_dim : cfg.hidden;
      ok = layer.w_input.rows() == 4 * cfg.hidden &&
           layer.w_input.cols() == in &&
           layer.w_recurrent.rows() == 4 * cfg.hidden &&
           layer.w_recurrent.cols() == cfg.hidden &&
           layer.bias.rows() == 4 * cfg.hidden && layer.bias.cols() == 1;
    }
  }
  if (!ok) throw DimensionError("parameter tensors disagree with model config");
}

template <class Scalar>
struct ForwardPass {
  Matrix<Scalar> logits;  // kOutputVocabSize x decoder steps, one column each
  StackCache<Scalar> encoder_caches, decoder_caches;
  StackState<Scalar> encoder_final;
};

/// Encoder consumes the input left to right; its final state initialises the
/// decoder, which is driven by the given previous-output tokens (teacher
/// forcing) and emits one logit column per step. No attention.
template <class Scalar>
ForwardPass<Scalar> forward(const Params<Scalar>& params,
                            const ModelConfig& cfg,
                            std::span<const int> input_ids,
                            std::span<const int> decoder_input_ids) {
  validate_shapes(params, cfg);
  for (int id : input_ids) {
    if (id < 0 || id >= cfg.vocab_size) {
      throw DimensionError("input id " + std::to_string(id) +
                           " outside vocabulary");
    }
  }
  for (int id : decoder_input_ids) {
    if (id < 0 || id >= kOutputVocabSize) {
      throw DimensionError("decoder input id " + std::to_string(id) +
                           " outside output vocabulary");
    }
  }

  ForwardPass<Scalar> pass;
  StackState<Scalar> state = StackState<Scalar>::zeros(params.encoder_layers);
  pass.encoder_caches.resize(input_ids.size());
  for (std::size_t t = 0; t < input_ids.size(); ++t) {
    Vector<Scalar> x = params.encoder_embedding.col(input_ids[t]);
    stack_step(params.encoder_layers, x, state, pass.encoder_caches[t]);
  }
  pass.encoder_final = state;

  pass.decoder_caches.resize(decoder_input_ids.size());
  pass.logits.resize(kOutputVocabSize,
                     static_cast<Eigen::Index>(decoder_input_ids.size()));
  for (std::size_t t = 0; t < decoder_input_ids.size(); ++t) {
    Vector<Scalar> x = params.decoder_embedding.col(decoder_input_ids[t]);
    const Vector<Scalar>& top =
        stack_step(params.decoder_layers, x, state, pass.decoder_caches[t]);
    pass.logits.col(static_cast<Eigen::Index>(t)) =
        params.output_weight * top + params.output_bias.col(0);
  }
  return pass;
}

template <class Scalar>
Vector<Scalar> softmax(const Vector<Scalar>& logits) {
  Vector<Scalar> shifted =
      (logits.array() - logits.maxCoeff()).exp().matrix();
  return shifted / shifted.sum();
}

struct Example {
  std::vector<int> input_ids;
  std::vector<int> labels;  // one 0/1 label per sign
};

namespace detail {

inline std::vector<int> decoder_inputs_for(const std::vector<int>& labels) {
  std::vector<int> ids;
  ids.reserve(labels.size() + 1);
  ids.push_back(kOutSos);
  for (int l : labels) ids.push_back(label_to_output_id(l));
  return ids;
}

inline std::vector<int> targets_for(const std::vector<int>& labels) {
  std::vector<int> ids;
  ids.reserve(labels.size() + 1);
  for (int l : labels) ids.push_back(label_to_output_id(l));
  ids.push_back(kOutEos);
  return ids;
}

template <class Scalar>
Scalar cross_entropy(const Vector<Scalar>& logits, int target) {
  Scalar max = logits.maxCoeff();
  Scalar lse = max + std::log((logits.array() - max).exp().sum());
  return lse - logits(target);
}

}  // namespace detail

/// Mean token-level cross-entropy of teacher-forced decoding over the batch.
template <class Scalar>
Scalar batch_loss(const Params<Scalar>& params, const ModelConfig& cfg,
                  std::span<const Example> batch) {
  Scalar total = 0;
  long tokens = 0;
  for (const Example& ex : batch) {
    auto dec_in = detail::decoder_inputs_for(ex.labels);
    auto targets = detail::targets_for(ex.labels);
    ForwardPass<Scalar> pass = forward(params, cfg, ex.input_ids, dec_in);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      total += detail::cross_entropy<Scalar>(
          pass.logits.col(static_cast<Eigen::Index>(t)), targets[t]);
      ++tokens;
    }
  }
  if (tokens == 0) throw DimensionError("empty batch");
  return total / static_cast<Scalar>(tokens);
}

/// Loss plus full BPTT gradients, shaped like the parameters.
/// Throws NonFiniteError when the loss or any gradient leaves the finite range.
template <class Scalar>
std::pair<Scalar, Params<Scalar>> loss_and_gradients(
    const Params<Scalar>& params, const ModelConfig& cfg,
    std::span<const Example> batch) {
  Params<Scalar> grads = zero_params<Scalar>(cfg);
  Scalar total = 0;
  long tokens = 0;

  for (const Example& ex : batch) {
    auto dec_in = detail::decoder_inputs_for(ex.labels);
    auto targets = detail::targets_for(ex.labels);
    ForwardPass<Scalar> pass = forward(params, cfg, ex.input_ids, dec_in);

    std::vector<Vector<Scalar>> d_dec_top(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
      auto col = pass.logits.col(static_cast<Eigen::Index>(t));
      total += detail::cross_entropy<Scalar>(col, targets[t]);
      ++tokens;
      Vector<Scalar> d_logits = softmax<Scalar>(col);
      d_logits(targets[t]) -= Scalar(1);
      const Vector<Scalar>& top = pass.decoder_caches[t].back().hidden;
      grads.output_weight.noalias() += d_logits * top.transpose();
      grads.output_bias.col(0) += d_logits;
      d_dec_top[t] = params.output_weight.transpose() * d_logits;
    }

    StackBackwardResult<Scalar> dec_back = stack_backward<Scalar>(
        params.decoder_layers, grads.decoder_layers, pass.decoder_caches,
        d_dec_top, static_cast<const StackState<Scalar>*>(nullptr));
    for (std::size_t t = 0; t < dec_in.size(); ++t) {
      grads.decoder_embedding.col(dec_in[t]) += dec_back.d_inputs[t];
    }

    std::vector<Vector<Scalar>> d_enc_top(
        ex.input_ids.size(), Vector<Scalar>::Zero(cfg.hidden));
    StackBackwardResult<Scalar> enc_back =
        stack_backward(params.encoder_layers, grads.encoder_layers,
                       pass.encoder_caches, d_enc_top, &dec_back.d_initial);
    for (std::size_t t = 0; t < ex.input_ids.size(); ++t) {
      grads.encoder_embedding.col(ex.input_ids[t]) += enc_back.d_inputs[t];
    }
  }

  if (tokens == 0) throw DimensionError("empty batch");
  const Scalar scale = Scalar(1) / static_cast<Scalar>(tokens);
  total *= scale;
  bool finite = std::isfinite(static_cast<double>(total));
  grads.for_each_tensor([&](std::string_view, Matrix<Scalar>& m) {
    m *= scale;
    finite = finite && m.allFinite();
  });
  if (!finite) {
    throw NonFiniteError("loss or gradients are not finite");
  }
  return {total, std::move(grads)};
}

enum class DecodeMode { free, constrained };

constexpr std::size_t kFreeDecodeMargin = 5;

/// Greedy decoding. Free mode runs until EOS or n_signs + margin steps;
/// constrained mode emits exactly one label token per sign. Raw output text
/// is coerced through postprocess either way.
template <class Scalar>
std::vector<int> predict(const Params<Scalar>& params, const ModelConfig& cfg,
                         std::span<const int> input_ids, std::size_t n_signs,
                         DecodeMode mode) {
  validate_shapes(params, cfg);
  StackState<Scalar> state = StackState<Scalar>::zeros(params.encoder_layers);
  std::vector<LstmStepCache<Scalar>> scratch;
  for (int id : input_ids) {
    if (id < 0 || id >= cfg.vocab_size) {
      throw DimensionError("input id " + std::to_string(id) +
                           " outside vocabulary");
    }
    Vector<Scalar> x = params.encoder_embedding.col(id);
    stack_step(params.encoder_layers, x, state, scratch);
  }

  const std::size_t cap =
      mode == DecodeMode::constrained ? n_signs : n_signs + kFreeDecodeMargin;
  std::string decoded;
  int previous = kOutSos;
  for (std::size_t t = 0; t < cap; ++t) {
    Vector<Scalar> x = params.decoder_embedding.col(previous);
    const Vector<Scalar>& top =
        stack_step(params.decoder_layers, x, state, scratch);
    Vector<Scalar> logits = params.output_weight * top + params.output_bias.col(0);
    int choice;
    if (mode == DecodeMode::constrained) {
      choice = logits(kOutOne) > logits(kOutZero) ? kOutOne : kOutZero;
    } else {
      Eigen::Index best = 0;
      logits.maxCoeff(&best);
      choice = static_cast<int>(best);
      if (choice == kOutEos) break;
    }
    if (!decoded.empty()) decoded += ' ';
    decoded += output_token_text(choice);
    previous = choice;
  }
  return postprocess(decoded, n_signs);
}

}  // namespace hieroclf::nn
