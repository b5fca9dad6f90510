#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "scene/models/descriptor.hpp"
#include "scene/nn/adam.hpp"
#include "scene/nn/layers.hpp"
#include "scene/nn/lstm.hpp"
#include "scene/rng.hpp"

namespace scene::models {

/// A model is its descriptor plus the layer stack built from it. Forward
/// stops at the logits; softmax is applied by predict (and fused with the
/// loss during training).
template <typename T>
class Model {
 public:
  Model(ArchitectureDescriptor desc, std::vector<std::unique_ptr<nn::Layer<T>>> layers)
      : desc_(std::move(desc)), layers_(std::move(layers)) {}

  const ArchitectureDescriptor& descriptor() const { return desc_; }

  TensorT<T> forward(const TensorT<T>& x, nn::Mode mode, Rng* rng) {
    if (x.shape != desc_.input_shape) {
      throw std::invalid_argument("model input shape mismatch: got " +
                                  shape_to_string(x.shape) + ", want " +
                                  shape_to_string(desc_.input_shape));
    }
    TensorT<T> cur = x;
    for (auto& layer : layers_) cur = layer->forward(cur, mode, rng);
    return cur;
  }

  TensorT<T> backward(const TensorT<T>& grad_logits) {
    TensorT<T> grad = grad_logits;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
      grad = (*it)->backward(grad);
    }
    return grad;
  }

  /// Class posteriors with dropout disabled.
  TensorT<T> predict(const TensorT<T>& x) {
    return nn::softmax(forward(x, nn::Mode::Eval, nullptr));
  }

  std::vector<nn::ParamRef<T>> params() {
    std::vector<nn::ParamRef<T>> out;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      layers_[i]->collect_params("L" + std::to_string(i) + "." +
                                     nn::to_string(layers_[i]->spec().kind),
                                 out);
    }
    return out;
  }

  void zero_grads() {
    auto ps = params();
    nn::zero_gradients(ps);
  }

  std::size_t parameter_count() {
    std::size_t n = 0;
    for (const auto& p : params()) n += p.value->numel();
    return n;
  }

 private:
  ArchitectureDescriptor desc_;
  std::vector<std::unique_ptr<nn::Layer<T>>> layers_;
};

/// Builds the layer stack for a descriptor and initializes parameters from
/// the given rng (layer order fixes the draw order).
template <typename T>
Model<T> make_model(const ArchitectureDescriptor& desc, Rng& rng) {
  audit_shapes(desc);  // fail fast on inconsistent descriptors
  std::vector<std::unique_ptr<nn::Layer<T>>> layers;
  std::vector<int> cur = desc.input_shape;
  for (const auto& spec : desc.layers) {
    std::unique_ptr<nn::Layer<T>> layer;
    switch (spec.kind) {
      case nn::LayerKind::Conv2d:
        layer = std::make_unique<nn::Conv2dLayer<T>>(spec, cur);
        break;
      case nn::LayerKind::MaxPool2d:
        layer = std::make_unique<nn::MaxPool2dLayer<T>>(spec, cur);
        break;
      case nn::LayerKind::Conv1d:
        layer = std::make_unique<nn::Conv1dLayer<T>>(spec, cur);
        break;
      case nn::LayerKind::MaxPool1d:
        layer = std::make_unique<nn::MaxPool1dLayer<T>>(spec, cur);
        break;
      case nn::LayerKind::Flatten:
        layer = std::make_unique<nn::FlattenLayer<T>>(spec, cur);
        break;
      case nn::LayerKind::Dense:
      case nn::LayerKind::Softmax:
        layer = std::make_unique<nn::DenseLayer<T>>(spec, cur);
        break;
      case nn::LayerKind::Dropout:
        layer = std::make_unique<nn::DropoutLayer<T>>(spec, cur);
        break;
      case nn::LayerKind::Lstm:
        layer = std::make_unique<nn::LstmLayer<T>>(spec, cur);
        break;
    }
    layer->init_params(rng);
    cur = nn::layer_output_shape(spec, cur);
    layers.push_back(std::move(layer));
  }
  return Model<T>(desc, std::move(layers));
}

/// 2D CNN on 1x64x64 spectrogram images: three conv(3x3,'same',ReLU)+pool2
/// stages (32/64/64 filters), dense 128 with dropout 0.5, softmax over 9.
ArchitectureDescriptor cnn2d_descriptor(int image_size = 64);

/// 1D CNN on [T x M] MFCC sequences: conv 128xk100, conv 128xk30 + pool2,
/// conv 128xk15 + pool2 (all 'valid', ReLU), dense 128 with dropout 0.5,
/// softmax over 9.
ArchitectureDescriptor cnn1d_descriptor(int t_frames = 309, int n_mfcc = 20);

/// Three stacked stateless LSTMs (64 units; first two return sequences),
/// dropout 0.5, dense softmax head over 9.
ArchitectureDescriptor lstm_descriptor(int t_frames = 309, int n_mfcc = 20,
                                       bool peepholes = true);

template <typename T>
Model<T> build_cnn2d(Rng& rng, int image_size = 64) {
  return make_model<T>(cnn2d_descriptor(image_size), rng);
}

template <typename T>
Model<T> build_cnn1d(Rng& rng, int t_frames = 309, int n_mfcc = 20) {
  return make_model<T>(cnn1d_descriptor(t_frames, n_mfcc), rng);
}

template <typename T>
Model<T> build_lstm(Rng& rng, int t_frames = 309, int n_mfcc = 20, bool peepholes = true) {
  return make_model<T>(lstm_descriptor(t_frames, n_mfcc, peepholes), rng);
}

inline ArchitectureDescriptor cnn2d_descriptor(int image_size) {
  ArchitectureDescriptor d;
  d.name = "cnn2d";
  d.input_shape = {1, image_size, image_size};
  d.layers = {
      nn::LayerSpec::conv2d(32, 3, 3, nn::Padding::Same, true),
      nn::LayerSpec::maxpool2d(2),
      nn::LayerSpec::conv2d(64, 3, 3, nn::Padding::Same, true),
      nn::LayerSpec::maxpool2d(2),
      nn::LayerSpec::conv2d(64, 3, 3, nn::Padding::Same, true),
      nn::LayerSpec::maxpool2d(2),
      nn::LayerSpec::flatten(),
      nn::LayerSpec::dense(128, true, 0.5),
      nn::LayerSpec::softmax(9),
  };
  return d;
}

inline ArchitectureDescriptor cnn1d_descriptor(int t_frames, int n_mfcc) {
  ArchitectureDescriptor d;
  d.name = "cnn1d";
  d.input_shape = {t_frames, n_mfcc};
  d.layers = {
      nn::LayerSpec::conv1d(128, 100, nn::Padding::Valid, true),
      nn::LayerSpec::conv1d(128, 30, nn::Padding::Valid, true),
      nn::LayerSpec::maxpool1d(2),
      nn::LayerSpec::conv1d(128, 15, nn::Padding::Valid, true),
      nn::LayerSpec::maxpool1d(2),
      nn::LayerSpec::flatten(),
      nn::LayerSpec::dense(128, true, 0.5),
      nn::LayerSpec::softmax(9),
  };
  return d;
}

inline ArchitectureDescriptor lstm_descriptor(int t_frames, int n_mfcc, bool peepholes) {
  ArchitectureDescriptor d;
  d.name = "lstm";
  d.input_shape = {t_frames, n_mfcc};
  d.layers = {
      nn::LayerSpec::lstm(64, true, peepholes),
      nn::LayerSpec::lstm(64, true, peepholes),
      nn::LayerSpec::lstm(64, false, peepholes),
      nn::LayerSpec::dropout(0.5),
      nn::LayerSpec::softmax(9),
  };
  return d;
}

}  // namespace scene::models
