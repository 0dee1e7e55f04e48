#pragma once

#include <Eigen/Dense>
#include <vector>

namespace hieroclf::nn {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// One recurrent layer. Gate blocks are packed along the rows in the order
/// input, forget, cell, output.
template <class Scalar>
struct LstmLayer {
  Matrix<Scalar> w_input;      // 4H x in_dim
  Matrix<Scalar> w_recurrent;  // 4H x H
  Matrix<Scalar> bias;         // 4H x 1

  Eigen::Index hidden() const { return w_recurrent.cols(); }
  Eigen::Index input_dim() const { return w_input.cols(); }
};

template <class Scalar>
Vector<Scalar> sigmoid(const Vector<Scalar>& x) {
  return (Scalar(1) / (Scalar(1) + (-x.array()).exp())).matrix();
}

/// Everything the backward pass needs from one layer at one time step.
template <class Scalar>
struct LstmStepCache {
  Vector<Scalar> input, prev_hidden, prev_cell;
  Vector<Scalar> gate_in, gate_forget, gate_cell, gate_out;
  Vector<Scalar> cell, cell_tanh, hidden;
};

template <class Scalar>
void lstm_step(const LstmLayer<Scalar>& layer, const Vector<Scalar>& input,
               const Vector<Scalar>& prev_hidden,
               const Vector<Scalar>& prev_cell, LstmStepCache<Scalar>& cache) {
  const Eigen::Index h = layer.hidden();
  Vector<Scalar> z = layer.w_input * input + layer.w_recurrent * prev_hidden +
                     layer.bias.col(0);
  cache.input = input;
  cache.prev_hidden = prev_hidden;
  cache.prev_cell = prev_cell;
  cache.gate_in = sigmoid<Scalar>(z.head(h));
  cache.gate_forget = sigmoid<Scalar>(z.segment(h, h));
  cache.gate_cell = z.segment(2 * h, h).array().tanh().matrix();
  cache.gate_out = sigmoid<Scalar>(z.tail(h));
  cache.cell = cache.gate_forget.cwiseProduct(prev_cell) +
               cache.gate_in.cwiseProduct(cache.gate_cell);
  cache.cell_tanh = cache.cell.array().tanh().matrix();
  cache.hidden = cache.gate_out.cwiseProduct(cache.cell_tanh);
}

/// Backward through one step. d_hidden/d_cell carry the gradient w.r.t. this
/// step's outputs on entry and w.r.t. the previous step's state on exit.
/// Returns the gradient w.r.t. the step input.
template <class Scalar>
Vector<Scalar> lstm_step_backward(const LstmLayer<Scalar>& layer,
                                  LstmLayer<Scalar>& grad,
                                  const LstmStepCache<Scalar>& cache,
                                  Vector<Scalar>& d_hidden,
                                  Vector<Scalar>& d_cell) {
  const Eigen::Index h = layer.hidden();
  Vector<Scalar> d_gate_out = d_hidden.cwiseProduct(cache.cell_tanh);
  Vector<Scalar> dc =
      d_cell + (d_hidden.array() * cache.gate_out.array() *
                (Scalar(1) - cache.cell_tanh.array().square()))
                   .matrix();
  Vector<Scalar> d_gate_in = dc.cwiseProduct(cache.gate_cell);
  Vector<Scalar> d_gate_forget = dc.cwiseProduct(cache.prev_cell);
  Vector<Scalar> d_gate_cell = dc.cwiseProduct(cache.gate_in);
  d_cell = dc.cwiseProduct(cache.gate_forget);

  Vector<Scalar> dz(4 * h);
  dz.head(h) = (d_gate_in.array() * cache.gate_in.array() *
                (Scalar(1) - cache.gate_in.array()))
                   .matrix();
  dz.segment(h, h) = (d_gate_forget.array() * cache.gate_forget.array() *
                      (Scalar(1) - cache.gate_forget.array()))
                         .matrix();
  dz.segment(2 * h, h) =
      (d_gate_cell.array() * (Scalar(1) - cache.gate_cell.array().square()))
          .matrix();
  dz.tail(h) = (d_gate_out.array() * cache.gate_out.array() *
                (Scalar(1) - cache.gate_out.array()))
                   .matrix();

  grad.w_input.noalias() += dz * cache.input.transpose();
  grad.w_recurrent.noalias() += dz * cache.prev_hidden.transpose();
  grad.bias.col(0) += dz;
  d_hidden.noalias() = layer.w_recurrent.transpose() * dz;
  return layer.w_input.transpose() * dz;
}

/// Per-layer hidden/cell state of a layer stack.
template <class Scalar>
struct StackState {
  std::vector<Vector<Scalar>> hidden, cell;

  static StackState zeros(const std::vector<LstmLayer<Scalar>>& layers) {
    StackState s;
    for (const auto& layer : layers) {
      s.hidden.push_back(Vector<Scalar>::Zero(layer.hidden()));
      s.cell.push_back(Vector<Scalar>::Zero(layer.hidden()));
    }
    return s;
  }
};

/// caches[t][l]: layer l at time t.
template <class Scalar>
using StackCache = std::vector<std::vector<LstmStepCache<Scalar>>>;

/// Advance the whole stack one step; returns the top-layer hidden state.
template <class Scalar>
const Vector<Scalar>& stack_step(const std::vector<LstmLayer<Scalar>>& layers,
                                 const Vector<Scalar>& input,
                                 StackState<Scalar>& state,
                                 std::vector<LstmStepCache<Scalar>>& caches) {
  caches.resize(layers.size());
  const Vector<Scalar>* x = &input;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    lstm_step(layers[l], *x, state.hidden[l], state.cell[l], caches[l]);
    state.hidden[l] = caches[l].hidden;
    state.cell[l] = caches[l].cell;
    x = &state.hidden[l];
  }
  return state.hidden.back();
}

template <class Scalar>
struct StackBackwardResult {
  std::vector<Vector<Scalar>> d_inputs;  // per time step
  StackState<Scalar> d_initial;          // gradient w.r.t. the pre-run state
};

/// BPTT over a full run of the stack. d_top_hidden[t] is the gradient
/// arriving at the top hidden state at step t; d_final, when given, is the
/// gradient w.r.t. the state after the last step (e.g. from a decoder that
/// was initialised with it).
template <class Scalar>
StackBackwardResult<Scalar> stack_backward(
    const std::vector<LstmLayer<Scalar>>& layers,
    std::vector<LstmLayer<Scalar>>& grads, const StackCache<Scalar>& caches,
    const std::vector<Vector<Scalar>>& d_top_hidden,
    const StackState<Scalar>* d_final) {
  const std::size_t steps = caches.size();
  const std::size_t depth = layers.size();

  StackState<Scalar> d = StackState<Scalar>::zeros(layers);
  if (d_final) {
    for (std::size_t l = 0; l < depth; ++l) {
      d.hidden[l] = d_final->hidden[l];
      d.cell[l] = d_final->cell[l];
    }
  }

  StackBackwardResult<Scalar> result;
  result.d_inputs.resize(steps);
  for (std::size_t t = steps; t-- > 0;) {
    Vector<Scalar> d_below;
    for (std::size_t l = depth; l-- > 0;) {
      if (l == depth - 1) {
        d.hidden[l] += d_top_hidden[t];
      } else {
        d.hidden[l] += d_below;
      }
      Vector<Scalar> d_input = lstm_step_backward(
          layers[l], grads[l], caches[t][l], d.hidden[l], d.cell[l]);
      if (l == 0) {
        result.d_inputs[t] = std::move(d_input);
      } else {
        d_below = std::move(d_input);
      }
    }
  }
  result.d_initial = std::move(d);
  return result;
}

}  // namespace hieroclf::nn
