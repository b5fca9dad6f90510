#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "scene/data/batch.hpp"
#include "scene/eval/metrics.hpp"
#include "scene/models/ensemble.hpp"
#include "scene/models/model.hpp"
#include "scene/nn/adam.hpp"

namespace scene::models {

template <typename T>
struct Sample {
  TensorT<T> features;
  int label = 0;
};

struct TrainConfig {
  double lr = 1e-5;
  int epochs = 500;
  int batch_size = 50;
  std::uint64_t seed = 0;
  bool dropout_enabled = true;
  // stop once eval-mode train accuracy reaches this (percent); 0 disables
  double early_stop_train_acc = 0.0;
};

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
  double train_accuracy = 0.0;  // percent, eval-mode pass
  double val_macro_f1 = 0.0;    // percent
};

struct TrainResult {
  std::vector<EpochStats> log;
  int best_epoch = 0;
  double best_val_macro_f1 = 0.0;
};

/// Mini-batch Adam training with seeded shuffling. Leaves the model at the
/// parameters of the best-validation-macro-F1 epoch. Bit-reproducible for
/// a fixed config.
template <typename T>
TrainResult train_model(Model<T>& model, const std::vector<Sample<T>>& train,
                        const std::vector<Sample<T>>& val, const TrainConfig& cfg) {
  if (train.empty() || val.empty()) {
    throw std::invalid_argument("train and validation sets must be non-empty");
  }
  if (cfg.epochs <= 0) throw std::invalid_argument("epochs must be > 0");
  if (cfg.batch_size <= 0) throw std::invalid_argument("batch_size must be > 0");

  auto params = model.params();
  nn::AdamState<T> opt;
  opt.lr = cfg.lr;
  Rng dropout_rng(Rng::mix(cfg.seed, 0xd409u));

  TrainResult result;
  std::vector<TensorT<T>> best_params;
  double best_f1 = -1.0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    const auto batches =
        data::batch_indices(train.size(), cfg.batch_size, cfg.seed, epoch);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      nn::zero_gradients(params);
      for (const std::size_t idx : batches[b]) {
        const Sample<T>& s = train[idx];
        TensorT<T> logits = model.forward(s.features, nn::Mode::Train,
                                          cfg.dropout_enabled ? &dropout_rng : nullptr);
        auto [loss, grad] = nn::softmax_cross_entropy(logits, s.label);
        if (!std::isfinite(static_cast<double>(loss))) {
          throw std::runtime_error("training aborted: non-finite loss at epoch " +
                                   std::to_string(epoch) + ", batch " + std::to_string(b));
        }
        loss_sum += static_cast<double>(loss);
        model.backward(grad);
      }
      nn::adam_step(params, opt, 1.0 / static_cast<double>(batches[b].size()));
    }

    int train_hits = 0;
    for (const auto& s : train) {
      if (argmax(model.predict(s.features)) == s.label) ++train_hits;
    }
    const double train_acc = 100.0 * train_hits / static_cast<double>(train.size());

    eval::ConfusionMatrix cm;
    for (const auto& s : val) {
      cm.add(s.label, argmax(model.predict(s.features)));
    }
    const double val_f1 = eval::metric_report(cm).macro_f1;

    result.log.push_back({epoch, loss_sum / static_cast<double>(train.size()), train_acc,
                          val_f1});

    if (val_f1 > best_f1) {
      best_f1 = val_f1;
      result.best_epoch = epoch;
      best_params.clear();
      for (const auto& p : params) best_params.push_back(*p.value);
    }

    if (cfg.early_stop_train_acc > 0.0 && train_acc >= cfg.early_stop_train_acc) break;
  }

  for (std::size_t i = 0; i < params.size(); ++i) *params[i].value = best_params[i];
  result.best_val_macro_f1 = best_f1;
  return result;
}

/// CSV rendering of the per-epoch log: epoch,loss,train_accuracy,val_macro_f1.
std::string train_log_csv(const TrainResult& result);

inline std::string train_log_csv(const TrainResult& result) {
  std::string out = "epoch,loss,train_accuracy,val_macro_f1\n";
  char line[128];
  for (const auto& e : result.log) {
    std::snprintf(line, sizeof(line), "%d,%.9g,%.9g,%.9g\n", e.epoch, e.mean_loss,
                  e.train_accuracy, e.val_macro_f1);
    out += line;
  }
  return out;
}

}  // namespace scene::models
