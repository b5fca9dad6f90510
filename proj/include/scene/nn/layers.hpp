#pragma once

#include <Eigen/Core>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "scene/nn/layer_spec.hpp"
#include "scene/nn/ops.hpp"
#include "scene/rng.hpp"
#include "scene/tensor.hpp"

namespace scene::nn {

template <typename T>
using EMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapM = Eigen::Map<EMat<T>>;
template <typename T>
using CMapM = Eigen::Map<const EMat<T>>;

template <typename T>
struct ParamRef {
  std::string name;
  TensorT<T>* value;
  TensorT<T>* grad;
};

/// Computes the output shape of a single layer given its input shape.
/// Throws with a descriptive message when the shapes do not chain.
std::vector<int> layer_output_shape(const LayerSpec& spec, const std::vector<int>& in);

/// Number of trainable parameters a layer contributes for a given input shape.
std::size_t layer_parameter_count(const LayerSpec& spec, const std::vector<int>& in);

/// Base class for all layers. Forward caches whatever backward needs;
/// backward accumulates parameter gradients and returns the input gradient.
template <typename T>
class Layer {
 public:
  virtual ~Layer() = default;
  virtual const LayerSpec& spec() const = 0;
  virtual TensorT<T> forward(const TensorT<T>& x, Mode mode, Rng* rng) = 0;
  virtual TensorT<T> backward(const TensorT<T>& grad_out) = 0;
  virtual void collect_params(const std::string& prefix, std::vector<ParamRef<T>>& out) {
    (void)prefix;
    (void)out;
  }
  virtual void init_params(Rng& rng) { (void)rng; }

 protected:
  void require_cache(bool has_cache) const {
    if (!has_cache) throw std::logic_error("backward called without a cached forward pass");
  }
};

namespace detail {

template <typename T>
void glorot_uniform(TensorT<T>& w, int fan_in, int fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (T& v : w.data) v = static_cast<T>(rng.uniform(-limit, limit));
}

}  // namespace detail

/// 2-D convolution over [C,H,W] inputs, weights [C_out,C_in,kh,kw].
/// Implemented as im2col + GEMM; optional fused ReLU.
template <typename T>
class Conv2dLayer final : public Layer<T> {
 public:
  Conv2dLayer(LayerSpec spec, const std::vector<int>& in_shape) : spec_(spec) {
    if (in_shape.size() != 3) throw std::invalid_argument("conv2d expects [C,H,W] input");
    in_channels_ = in_shape[0];
    w_ = TensorT<T>({spec_.filters, in_channels_, spec_.kernel_h, spec_.kernel_w});
    b_ = TensorT<T>({spec_.filters});
    gw_ = TensorT<T>(w_.shape);
    gb_ = TensorT<T>(b_.shape);
  }

  const LayerSpec& spec() const override { return spec_; }

  void init_params(Rng& rng) override {
    const int k = spec_.kernel_h * spec_.kernel_w;
    detail::glorot_uniform(w_, in_channels_ * k, spec_.filters * k, rng);
    b_.fill(T(0));
  }

  void collect_params(const std::string& prefix, std::vector<ParamRef<T>>& out) override {
    out.push_back({prefix + ".w", &w_, &gw_});
    out.push_back({prefix + ".b", &b_, &gb_});
  }

  TensorT<T> forward(const TensorT<T>& x, Mode mode, Rng* rng) override {
    (void)mode;
    (void)rng;
    if (x.rank() != 3 || x.dim(0) != in_channels_) {
      throw std::invalid_argument("conv2d input shape mismatch: got " +
                                  shape_to_string(x.shape));
    }
    const int h = x.dim(1), w = x.dim(2);
    const int kh = spec_.kernel_h, kw = spec_.kernel_w, s = spec_.stride;
    int pad_top = 0, pad_left = 0, h_out, w_out;
    if (spec_.padding == Padding::Same) {
      if (s != 1) throw std::invalid_argument("'same' padding supports stride 1 only");
      h_out = h;
      w_out = w;
      pad_top = (kh - 1) / 2;
      pad_left = (kw - 1) / 2;
    } else {
      if (h < kh || w < kw) throw std::invalid_argument("conv2d kernel larger than input");
      h_out = (h - kh) / s + 1;
      w_out = (w - kw) / s + 1;
    }

    const int krows = in_channels_ * kh * kw;
    const int n = h_out * w_out;
    cols_.resize(krows, n);
    for (int ci = 0; ci < in_channels_; ++ci) {
      for (int ki = 0; ki < kh; ++ki) {
        for (int kj = 0; kj < kw; ++kj) {
          const int r = (ci * kh + ki) * kw + kj;
          T* dst = cols_.data() + static_cast<std::ptrdiff_t>(r) * n;
          for (int oy = 0; oy < h_out; ++oy) {
            const int iy = oy * s + ki - pad_top;
            for (int ox = 0; ox < w_out; ++ox) {
              const int ix = ox * s + kj - pad_left;
              dst[oy * w_out + ox] =
                  (iy >= 0 && iy < h && ix >= 0 && ix < w) ? x(ci, iy, ix) : T(0);
            }
          }
        }
      }
    }

    TensorT<T> out({spec_.filters, h_out, w_out});
    CMapM<T> wm(w_.data.data(), spec_.filters, krows);
    MapM<T> om(out.data.data(), spec_.filters, n);
    om.noalias() = wm * cols_;
    for (int co = 0; co < spec_.filters; ++co) om.row(co).array() += b_(co);

    if (spec_.relu) {
      relu_mask_.assign(out.numel(), 0);
      for (std::size_t i = 0; i < out.data.size(); ++i) {
        if (out.data[i] > T(0)) {
          relu_mask_[i] = 1;
        } else {
          out.data[i] = T(0);
        }
      }
    }
    in_shape_ = x.shape;
    pad_top_ = pad_top;
    pad_left_ = pad_left;
    out_shape_ = out.shape;
    has_cache_ = true;
    return out;
  }

  TensorT<T> backward(const TensorT<T>& grad_out) override {
    this->require_cache(has_cache_);
    if (grad_out.shape != out_shape_) {
      throw std::invalid_argument("conv2d grad shape mismatch");
    }
    const int h = in_shape_[1], w = in_shape_[2];
    const int kh = spec_.kernel_h, kw = spec_.kernel_w, s = spec_.stride;
    const int h_out = out_shape_[1], w_out = out_shape_[2];
    const int krows = in_channels_ * kh * kw;
    const int n = h_out * w_out;

    TensorT<T> g = grad_out;
    if (spec_.relu) {
      for (std::size_t i = 0; i < g.data.size(); ++i) {
        if (!relu_mask_[i]) g.data[i] = T(0);
      }
    }

    CMapM<T> gm(g.data.data(), spec_.filters, n);
    MapM<T> gwm(gw_.data.data(), spec_.filters, krows);
    gwm.noalias() += gm * cols_.transpose();
    for (int co = 0; co < spec_.filters; ++co) gb_(co) += gm.row(co).sum();

    CMapM<T> wm(w_.data.data(), spec_.filters, krows);
    EMat<T> gcols = wm.transpose() * gm;

    TensorT<T> grad_x(in_shape_);
    for (int ci = 0; ci < in_channels_; ++ci) {
      for (int ki = 0; ki < kh; ++ki) {
        for (int kj = 0; kj < kw; ++kj) {
          const int r = (ci * kh + ki) * kw + kj;
          const T* src = gcols.data() + static_cast<std::ptrdiff_t>(r) * n;
          for (int oy = 0; oy < h_out; ++oy) {
            const int iy = oy * s + ki - pad_top_;
            if (iy < 0 || iy >= h) continue;
            for (int ox = 0; ox < w_out; ++ox) {
              const int ix = ox * s + kj - pad_left_;
              if (ix < 0 || ix >= w) continue;
              grad_x(ci, iy, ix) += src[oy * w_out + ox];
            }
          }
        }
      }
    }
    return grad_x;
  }

 private:
  LayerSpec spec_;
  int in_channels_ = 0;
  TensorT<T> w_, b_, gw_, gb_;
  // cache
  EMat<T> cols_;
  std::vector<int> in_shape_, out_shape_;
  std::vector<unsigned char> relu_mask_;
  int pad_top_ = 0, pad_left_ = 0;
  bool has_cache_ = false;
};

/// 1-D convolution over [T,C_in] sequences, weights [C_out,C_in,k].
template <typename T>
class Conv1dLayer final : public Layer<T> {
 public:
  Conv1dLayer(LayerSpec spec, const std::vector<int>& in_shape) : spec_(spec) {
    if (in_shape.size() != 2) throw std::invalid_argument("conv1d expects [T,C] input");
    in_channels_ = in_shape[1];
    w_ = TensorT<T>({spec_.filters, in_channels_, spec_.kernel});
    b_ = TensorT<T>({spec_.filters});
    gw_ = TensorT<T>(w_.shape);
    gb_ = TensorT<T>(b_.shape);
  }

  const LayerSpec& spec() const override { return spec_; }

  void init_params(Rng& rng) override {
    detail::glorot_uniform(w_, in_channels_ * spec_.kernel, spec_.filters * spec_.kernel, rng);
    b_.fill(T(0));
  }

  void collect_params(const std::string& prefix, std::vector<ParamRef<T>>& out) override {
    out.push_back({prefix + ".w", &w_, &gw_});
    out.push_back({prefix + ".b", &b_, &gb_});
  }

  TensorT<T> forward(const TensorT<T>& x, Mode mode, Rng* rng) override {
    (void)mode;
    (void)rng;
    if (x.rank() != 2 || x.dim(1) != in_channels_) {
      throw std::invalid_argument("conv1d input shape mismatch: got " +
                                  shape_to_string(x.shape));
    }
    if (spec_.padding != Padding::Valid) {
      throw std::invalid_argument("conv1d supports 'valid' padding only");
    }
    const int t_in = x.dim(0), k = spec_.kernel, s = spec_.stride;
    if (t_in < k) {
      throw std::invalid_argument("conv1d kernel (" + std::to_string(k) +
                                  ") larger than sequence (" + std::to_string(t_in) + ")");
    }
    const int t_out = (t_in - k) / s + 1;
    const int krows = in_channels_ * k;

    cols_.resize(krows, t_out);
    for (int ci = 0; ci < in_channels_; ++ci) {
      for (int kj = 0; kj < k; ++kj) {
        const int r = ci * k + kj;
        T* dst = cols_.data() + static_cast<std::ptrdiff_t>(r) * t_out;
        for (int t = 0; t < t_out; ++t) dst[t] = x(t * s + kj, ci);
      }
    }

    TensorT<T> out({t_out, spec_.filters});
    CMapM<T> wm(w_.data.data(), spec_.filters, krows);
    MapM<T> om(out.data.data(), t_out, spec_.filters);
    om.noalias() = cols_.transpose() * wm.transpose();
    for (int t = 0; t < t_out; ++t) {
      for (int co = 0; co < spec_.filters; ++co) out(t, co) += b_(co);
    }

    if (spec_.relu) {
      relu_mask_.assign(out.numel(), 0);
      for (std::size_t i = 0; i < out.data.size(); ++i) {
        if (out.data[i] > T(0)) {
          relu_mask_[i] = 1;
        } else {
          out.data[i] = T(0);
        }
      }
    }
    t_in_ = t_in;
    out_shape_ = out.shape;
    has_cache_ = true;
    return out;
  }

  TensorT<T> backward(const TensorT<T>& grad_out) override {
    this->require_cache(has_cache_);
    if (grad_out.shape != out_shape_) throw std::invalid_argument("conv1d grad shape mismatch");
    const int t_out = out_shape_[0], k = spec_.kernel, s = spec_.stride;
    const int krows = in_channels_ * k;

    TensorT<T> g = grad_out;
    if (spec_.relu) {
      for (std::size_t i = 0; i < g.data.size(); ++i) {
        if (!relu_mask_[i]) g.data[i] = T(0);
      }
    }

    CMapM<T> gm(g.data.data(), t_out, spec_.filters);  // [T_out, C_out]
    MapM<T> gwm(gw_.data.data(), spec_.filters, krows);
    gwm.noalias() += gm.transpose() * cols_.transpose();
    for (int co = 0; co < spec_.filters; ++co) gb_(co) += gm.col(co).sum();

    CMapM<T> wm(w_.data.data(), spec_.filters, krows);
    EMat<T> gcols = wm.transpose() * gm.transpose();  // [K, T_out]

    TensorT<T> grad_x({t_in_, in_channels_});
    for (int ci = 0; ci < in_channels_; ++ci) {
      for (int kj = 0; kj < k; ++kj) {
        const int r = ci * k + kj;
        const T* src = gcols.data() + static_cast<std::ptrdiff_t>(r) * t_out;
        for (int t = 0; t < t_out; ++t) grad_x(t * s + kj, ci) += src[t];
      }
    }
    return grad_x;
  }

 private:
  LayerSpec spec_;
  int in_channels_ = 0;
  TensorT<T> w_, b_, gw_, gb_;
  EMat<T> cols_;
  std::vector<int> out_shape_;
  std::vector<unsigned char> relu_mask_;
  int t_in_ = 0;
  bool has_cache_ = false;
};

/// Max pooling over the spatial dims of [C,H,W]. The remainder when a dim is
/// not divisible by the kernel is truncated. Ties route the gradient to the
/// first element in row-major window order.
template <typename T>
class MaxPool2dLayer final : public Layer<T> {
 public:
  MaxPool2dLayer(LayerSpec spec, const std::vector<int>& in_shape) : spec_(spec) {
    if (in_shape.size() != 3) throw std::invalid_argument("maxpool2d expects [C,H,W] input");
  }

  const LayerSpec& spec() const override { return spec_; }

  TensorT<T> forward(const TensorT<T>& x, Mode, Rng*) override {
    const int c = x.dim(0), h = x.dim(1), w = x.dim(2), k = spec_.kernel;
    const int h_out = h / k, w_out = w / k;
    if (h_out == 0 || w_out == 0) throw std::invalid_argument("maxpool2d input smaller than kernel");
    TensorT<T> out({c, h_out, w_out});
    argmax_.assign(out.numel(), 0);
    std::size_t oi = 0;
    for (int ci = 0; ci < c; ++ci) {
      for (int oy = 0; oy < h_out; ++oy) {
        for (int ox = 0; ox < w_out; ++ox, ++oi) {
          T best = x(ci, oy * k, ox * k);
          std::size_t best_idx = (static_cast<std::size_t>(ci) * h + oy * k) * w + ox * k;
          for (int dy = 0; dy < k; ++dy) {
            for (int dx = 0; dx < k; ++dx) {
              const T v = x(ci, oy * k + dy, ox * k + dx);
              if (v > best) {
                best = v;
                best_idx = (static_cast<std::size_t>(ci) * h + oy * k + dy) * w + ox * k + dx;
              }
            }
          }
          out.data[oi] = best;
          argmax_[oi] = best_idx;
        }
      }
    }
    in_shape_ = x.shape;
    out_shape_ = out.shape;
    has_cache_ = true;
    return out;
  }

  TensorT<T> backward(const TensorT<T>& grad_out) override {
    this->require_cache(has_cache_);
    if (grad_out.shape != out_shape_) throw std::invalid_argument("maxpool2d grad shape mismatch");
    TensorT<T> grad_x(in_shape_);
    for (std::size_t i = 0; i < grad_out.data.size(); ++i) {
      grad_x.data[argmax_[i]] += grad_out.data[i];
    }
    return grad_x;
  }

 private:
  LayerSpec spec_;
  std::vector<std::size_t> argmax_;
  std::vector<int> in_shape_, out_shape_;
  bool has_cache_ = false;
};

/// Max pooling over the time axis of [T,C].
template <typename T>
class MaxPool1dLayer final : public Layer<T> {
 public:
  MaxPool1dLayer(LayerSpec spec, const std::vector<int>& in_shape) : spec_(spec) {
    if (in_shape.size() != 2) throw std::invalid_argument("maxpool1d expects [T,C] input");
  }

  const LayerSpec& spec() const override { return spec_; }

  TensorT<T> forward(const TensorT<T>& x, Mode, Rng*) override {
    const int t_in = x.dim(0), c = x.dim(1), k = spec_.kernel;
    const int t_out = t_in / k;
    if (t_out == 0) throw std::invalid_argument("maxpool1d input smaller than kernel");
    TensorT<T> out({t_out, c});
    argmax_.assign(out.numel(), 0);
    for (int t = 0; t < t_out; ++t) {
      for (int ci = 0; ci < c; ++ci) {
        T best = x(t * k, ci);
        std::size_t best_idx = static_cast<std::size_t>(t * k) * c + ci;
        for (int d = 1; d < k; ++d) {
          const T v = x(t * k + d, ci);
          if (v > best) {
            best = v;
            best_idx = static_cast<std::size_t>(t * k + d) * c + ci;
          }
        }
        out(t, ci) = best;
        argmax_[static_cast<std::size_t>(t) * c + ci] = best_idx;
      }
    }
    in_shape_ = x.shape;
    out_shape_ = out.shape;
    has_cache_ = true;
    return out;
  }

  TensorT<T> backward(const TensorT<T>& grad_out) override {
    this->require_cache(has_cache_);
    if (grad_out.shape != out_shape_) throw std::invalid_argument("maxpool1d grad shape mismatch");
    TensorT<T> grad_x(in_shape_);
    for (std::size_t i = 0; i < grad_out.data.size(); ++i) {
      grad_x.data[argmax_[i]] += grad_out.data[i];
    }
    return grad_x;
  }

 private:
  LayerSpec spec_;
  std::vector<std::size_t> argmax_;
  std::vector<int> in_shape_, out_shape_;
  bool has_cache_ = false;
};

template <typename T>
class FlattenLayer final : public Layer<T> {
 public:
  FlattenLayer(LayerSpec spec, const std::vector<int>&) : spec_(spec) {}

  const LayerSpec& spec() const override { return spec_; }

  TensorT<T> forward(const TensorT<T>& x, Mode, Rng*) override {
    in_shape_ = x.shape;
    has_cache_ = true;
    TensorT<T> out;
    out.shape = {static_cast<int>(x.numel())};
    out.data = x.data;
    return out;
  }

  TensorT<T> backward(const TensorT<T>& grad_out) override {
    this->require_cache(has_cache_);
    TensorT<T> grad;
    grad.shape = in_shape_;
    grad.data = grad_out.data;
    return grad;
  }

 private:
  LayerSpec spec_;
  std::vector<int> in_shape_;
  bool has_cache_ = false;
};

/// Fully connected layer on 1-D inputs: y = Wx + b, with optional fused
/// ReLU and inverted dropout (applied in that order).
template <typename T>
class DenseLayer final : public Layer<T> {
 public:
  DenseLayer(LayerSpec spec, const std::vector<int>& in_shape) : spec_(spec) {
    if (in_shape.size() != 1) throw std::invalid_argument("dense expects 1-D input");
    in_dim_ = in_shape[0];
    const int out_dim = spec_.kind == LayerKind::Softmax ? spec_.classes : spec_.units;
    w_ = TensorT<T>({out_dim, in_dim_});
    b_ = TensorT<T>({out_dim});
    gw_ = TensorT<T>(w_.shape);
    gb_ = TensorT<T>(b_.shape);
  }

  const LayerSpec& spec() const override { return spec_; }

  void init_params(Rng& rng) override {
    detail::glorot_uniform(w_, in_dim_, w_.dim(0), rng);
    b_.fill(T(0));
  }

  void collect_params(const std::string& prefix, std::vector<ParamRef<T>>& out) override {
    out.push_back({prefix + ".w", &w_, &gw_});
    out.push_back({prefix + ".b", &b_, &gb_});
  }

  TensorT<T> forward(const TensorT<T>& x, Mode mode, Rng* rng) override {
    if (x.rank() != 1 || x.dim(0) != in_dim_) {
      throw std::invalid_argument("dense input shape mismatch: got " +
                                  shape_to_string(x.shape) + ", want [" +
                                  std::to_string(in_dim_) + "]");
    }
    const int out_dim = w_.dim(0);
    TensorT<T> out({out_dim});
    CMapM<T> wm(w_.data.data(), out_dim, in_dim_);
    CMapM<T> xm(x.data.data(), in_dim_, 1);
    MapM<T> om(out.data.data(), out_dim, 1);
    om.noalias() = wm * xm;
    for (int i = 0; i < out_dim; ++i) out(i) += b_(i);

    if (spec_.relu) {
      relu_mask_.assign(out.numel(), 0);
      for (std::size_t i = 0; i < out.data.size(); ++i) {
        if (out.data[i] > T(0)) {
          relu_mask_[i] = 1;
        } else {
          out.data[i] = T(0);
        }
      }
    }
    if (spec_.dropout_rate > 0.0) {
      out = nn::dropout(out, spec_.dropout_rate, mode, rng, &drop_mask_);
    }
    x_ = x;
    has_cache_ = true;
    return out;
  }

  TensorT<T> backward(const TensorT<T>& grad_out) override {
    this->require_cache(has_cache_);
    TensorT<T> g = grad_out;
    if (spec_.dropout_rate > 0.0) {
      for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] *= drop_mask_.data[i];
    }
    if (spec_.relu) {
      for (std::size_t i = 0; i < g.data.size(); ++i) {
        if (!relu_mask_[i]) g.data[i] = T(0);
      }
    }
    const int out_dim = w_.dim(0);
    CMapM<T> gm(g.data.data(), out_dim, 1);
    CMapM<T> xm(x_.data.data(), in_dim_, 1);
    MapM<T> gwm(gw_.data.data(), out_dim, in_dim_);
    gwm.noalias() += gm * xm.transpose();
    for (int i = 0; i < out_dim; ++i) gb_(i) += g(i);

    TensorT<T> grad_x({in_dim_});
    CMapM<T> wm(w_.data.data(), out_dim, in_dim_);
    MapM<T> gxm(grad_x.data.data(), in_dim_, 1);
    gxm.noalias() = wm.transpose() * gm;
    return grad_x;
  }

 private:
  LayerSpec spec_;
  int in_dim_ = 0;
  TensorT<T> w_, b_, gw_, gb_;
  TensorT<T> x_, drop_mask_;
  std::vector<unsigned char> relu_mask_;
  bool has_cache_ = false;
};

/// Standalone inverted dropout layer (shape preserving).
template <typename T>
class DropoutLayer final : public Layer<T> {
 public:
  DropoutLayer(LayerSpec spec, const std::vector<int>&) : spec_(spec) {}

  const LayerSpec& spec() const override { return spec_; }

  TensorT<T> forward(const TensorT<T>& x, Mode mode, Rng* rng) override {
    has_cache_ = true;
    return nn::dropout(x, spec_.dropout_rate, mode, rng, &mask_);
  }

  TensorT<T> backward(const TensorT<T>& grad_out) override {
    this->require_cache(has_cache_);
    TensorT<T> g = grad_out;
    for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] *= mask_.data[i];
    return g;
  }

 private:
  LayerSpec spec_;
  TensorT<T> mask_;
  bool has_cache_ = false;
};

}  // namespace scene::nn
