#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "scene/nn/layers.hpp"

namespace scene::nn {

/// Adam with bias correction. Moments are allocated lazily on the first
/// step so a state can be constructed before the parameter list exists.
template <typename T>
struct AdamState {
  double lr = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<TensorT<T>> m, v;
};

template <typename T>
void adam_step(const std::vector<ParamRef<T>>& params, AdamState<T>& st,
               double grad_scale = 1.0) {
  if (st.m.empty()) {
    st.m.reserve(params.size());
    st.v.reserve(params.size());
    for (const auto& p : params) {
      st.m.emplace_back(p.value->shape);
      st.v.emplace_back(p.value->shape);
    }
  }
  if (st.m.size() != params.size()) {
    throw std::invalid_argument("adam state does not match parameter list");
  }
  ++st.step;
  const double bc1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.step));
  const double bc2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.step));
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    const auto& p = params[pi];
    if (!p.value->same_shape(*p.grad) || !p.value->same_shape(st.m[pi])) {
      throw std::invalid_argument("adam parameter/gradient shape mismatch");
    }
    T* w = p.value->data.data();
    const T* gr = p.grad->data.data();
    T* m = st.m[pi].data.data();
    T* v = st.v[pi].data.data();
    const std::size_t n = p.value->numel();
    for (std::size_t i = 0; i < n; ++i) {
      const double g = static_cast<double>(gr[i]) * grad_scale;
      const double mi = st.beta1 * m[i] + (1.0 - st.beta1) * g;
      const double vi = st.beta2 * v[i] + (1.0 - st.beta2) * g * g;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      const double m_hat = mi / bc1;
      const double v_hat = vi / bc2;
      w[i] = static_cast<T>(w[i] - st.lr * m_hat / (std::sqrt(v_hat) + st.eps));
    }
  }
}

template <typename T>
void zero_gradients(const std::vector<ParamRef<T>>& params) {
  for (const auto& p : params) p.grad->fill(T(0));
}

}  // namespace scene::nn
