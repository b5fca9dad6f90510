#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "scene/rng.hpp"
#include "scene/tensor.hpp"

namespace scene::nn {

enum class Mode { Train, Eval };

template <typename T>
TensorT<T> relu(const TensorT<T>& x) {
  TensorT<T> out = x;
  for (T& v : out.data) v = v > T(0) ? v : T(0);
  return out;
}

/// relu'(0) = 0 by convention.
template <typename T>
TensorT<T> relu_backward(const TensorT<T>& grad_out, const TensorT<T>& x) {
  if (!grad_out.same_shape(x)) throw std::invalid_argument("relu_backward shape mismatch");
  TensorT<T> grad = grad_out;
  for (std::size_t i = 0; i < grad.data.size(); ++i) {
    if (!(x.data[i] > T(0))) grad.data[i] = T(0);
  }
  return grad;
}

/// Numerically stable softmax (max subtraction).
template <typename T>
TensorT<T> softmax(const TensorT<T>& logits) {
  TensorT<T> out = logits;
  T max_v = out.data[0];
  for (T v : out.data) max_v = std::max(max_v, v);
  T sum = T(0);
  for (T& v : out.data) {
    v = std::exp(v - max_v);
    sum += v;
  }
  for (T& v : out.data) v /= sum;
  return out;
}

template <typename T>
T cross_entropy(const TensorT<T>& probs, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= probs.numel()) {
    throw std::invalid_argument("cross_entropy label out of range");
  }
  return -std::log(probs.data[static_cast<std::size_t>(label)]);
}

/// Fused softmax + cross-entropy. Returns (loss, grad wrt logits = p - onehot).
template <typename T>
std::pair<T, TensorT<T>> softmax_cross_entropy(const TensorT<T>& logits, int label) {
  TensorT<T> probs = softmax(logits);
  const T loss = cross_entropy(probs, label);
  TensorT<T> grad = probs;
  grad.data[static_cast<std::size_t>(label)] -= T(1);
  return {loss, std::move(grad)};
}

/// Inverted dropout: in Train mode zeroes each unit with probability `rate`
/// and scales survivors by 1/(1-rate); Eval mode is the identity. The mask
/// (including the scale) is written to mask_out when given, so that
/// backward can reuse it.
template <typename T>
TensorT<T> dropout(const TensorT<T>& x, double rate, Mode mode, Rng* rng,
                   TensorT<T>* mask_out = nullptr) {
  if (rate < 0.0 || rate >= 1.0) {
    throw std::invalid_argument("dropout rate must be in [0, 1)");
  }
  if (mode == Mode::Eval || rate == 0.0 || rng == nullptr) {
    if (mask_out) {
      mask_out->shape = x.shape;
      mask_out->data.assign(x.numel(), T(1));
    }
    return x;
  }
  const T scale = static_cast<T>(1.0 / (1.0 - rate));
  TensorT<T> out = x;
  TensorT<T> mask;
  mask.shape = x.shape;
  mask.data.resize(x.numel());
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const bool keep = rng->uniform() >= rate;
    mask.data[i] = keep ? scale : T(0);
    out.data[i] *= mask.data[i];
  }
  if (mask_out) *mask_out = std::move(mask);
  return out;
}

}  // namespace scene::nn
