#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "scene/models/model.hpp"
#include "scene/tensor.hpp"

namespace scene::models {

/// Mixing weights for (2D CNN, 1D CNN, stateless LSTM), normalized to sum
/// to one on construction/load.
struct EnsembleWeights {
  double w1 = 0.3;
  double w2 = 0.4;
  double w3 = 0.3;

  void normalize() {
    if (w1 < 0.0 || w2 < 0.0 || w3 < 0.0) {
      throw std::runtime_error("ensemble weights must be non-negative");
    }
    const double sum = w1 + w2 + w3;
    if (sum <= 0.0) throw std::runtime_error("ensemble weights must not all be zero");
    w1 /= sum;
    w2 /= sum;
    w3 /= sum;
  }
};

namespace detail {
template <typename T>
void require_probability(const TensorT<T>& p) {
  double sum = 0.0;
  for (T v : p.data) sum += static_cast<double>(v);
  if (std::abs(sum - 1.0) > 1e-5) {
    throw std::invalid_argument("ensemble input does not sum to 1");
  }
}
}  // namespace detail

/// Weighted average of three class-posterior vectors.
template <typename T>
TensorT<T> ensemble_predict(const TensorT<T>& p1, const TensorT<T>& p2,
                            const TensorT<T>& p3, EnsembleWeights w) {
  if (!p1.same_shape(p2) || !p1.same_shape(p3)) {
    throw std::invalid_argument("ensemble inputs differ in shape");
  }
  detail::require_probability(p1);
  detail::require_probability(p2);
  detail::require_probability(p3);
  w.normalize();
  TensorT<T> out = p1;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = static_cast<T>(w.w1) * p1.data[i] + static_cast<T>(w.w2) * p2.data[i] +
                  static_cast<T>(w.w3) * p3.data[i];
  }
  return out;
}

template <typename T>
int argmax(const TensorT<T>& probs) {
  int best = 0;
  for (std::size_t i = 1; i < probs.data.size(); ++i) {
    if (probs.data[i] > probs.data[best]) best = static_cast<int>(i);
  }
  return best;
}

/// Segment-level posterior: per-channel posteriors averaged uniformly.
template <typename T>
TensorT<T> predict_segment(Model<T>& model, const std::vector<TensorT<T>>& channel_features) {
  if (channel_features.empty()) {
    throw std::invalid_argument("predict_segment needs at least one channel");
  }
  TensorT<T> acc = model.predict(channel_features[0]);
  for (std::size_t c = 1; c < channel_features.size(); ++c) {
    const TensorT<T> p = model.predict(channel_features[c]);
    for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += p.data[i];
  }
  const T inv = T(1) / static_cast<T>(channel_features.size());
  for (T& v : acc.data) v *= inv;
  return acc;
}

}  // namespace scene::models
