// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "risrec/mnist.hpp"
#include "risrec/recognizer.hpp"

namespace risrec {

struct DatasetItem {
    TargetImage image;
    int label = 0;
};

struct Dataset {
    std::vector<DatasetItem> items;
    int n_classes = 10;
    std::size_t size() const { return items.size(); }
};

// 28x28 byte image -> 30x30 target: one-pixel zero border, 255 mapped
// linearly to sigma_max, flattened row-major (length 900).
TargetImage to_target_image(const std::uint8_t* raw28x28, double sigma_max);

// Converts an image set into scattering targets. When `keep_digits` is
// non-empty only those digits are kept and labels are remapped to their
// position in the list; `per_class_limit` < 0 means unlimited.
Dataset build_target_dataset(const ImageSet& set, double sigma_max,
                             const std::vector<int>& keep_digits = {}, int per_class_limit = -1);

struct CrossEntropyStats {
    long clamped = 0; // true-class probabilities clamped at 1e-30
};

// Mean over the batch of -log(p[label]); probabilities are clamped at 1e-30
// instead of producing non-finite losses.
double cross_entropy(const std::vector<Eigen::VectorXd>& probs, const std::vector<int>& labels,
                     CrossEntropyStats* stats = nullptr);

struct AdamState {
    std::vector<ad::Tensor> m;
    std::vector<ad::Tensor> v;
    long step = 0;
};

// One Adam update with bias correction; `grads` aligned with the store order.
void adam_step(ParamStore& params, const std::vector<ad::Tensor>& grads, AdamState& state,
               double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

struct TrainConfig {
    int batch_size = 128;
    int epochs = 200;
    double learning_rate = 1e-3;
    int k = 4;        // measurements per episode
    double rho = 1.0; // fraction of the training pool used
    std::uint64_t seed = 1;
    int threads = 0; // 0 = hardware concurrency
    bool cosine_lr = false;
    std::optional<double> rx_noise_override_dbm; // overrides the scene noise

    void validate() const;
};

// Seed-deterministic pool selection and validation split: a permutation of
// [0, total) is drawn, the first round(rho*total) indices form the pool, the
// first tenth of the pool is validation and the rest is training.
struct DataSplit {
    std::vector<int> train;
    std::vector<int> val;
};
DataSplit split_dataset(std::size_t total, double rho, std::uint64_t seed);

struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_eta = 0.0;
    double wall_seconds = 0.0;
};

struct TrainResult {
    ParamStore best_params;
    std::vector<EpochMetrics> history;
    int best_epoch = -1;
    double best_val_eta = 0.0;
    double best_val_loss = 0.0;
};

enum class Method { Adaptive, Lisp, RandomPhase, NoRis };
std::string to_string(Method m);
Method method_from_string(const std::string& name);

// Shuffled mini-batch epochs with fresh per-sample noise seeds, gradient
// accumulation over the batch and one Adam step per batch. Returns the
// checkpoint with the best validation prediction rate (ties broken by lower
// validation loss).
TrainResult train(const Dataset& dataset, const SceneConfig& scene, const RecognizerConfig& rc,
                  const TrainConfig& tc);

// Same loop with the LISP forward model (K shared trainable phase vectors,
// one-shot classifier).
TrainResult train_lisp(const Dataset& dataset, const SceneConfig& scene,
                       const RecognizerConfig& rc, const TrainConfig& tc);

// Same loop with externally fixed phases; only the classifier is trained.
TrainResult train_fixed_phase(const Dataset& dataset, const SceneConfig& scene,
                              const RecognizerConfig& rc, const TrainConfig& tc,
                              const std::vector<PhaseConfig>& phases);

// No-RIS baseline: a single measurement of the TX -> target -> RX channel
// feeds the fixed-phase classifier shape.
TrainResult train_no_ris(const Dataset& dataset, const SceneConfig& scene,
                         const RecognizerConfig& rc, const TrainConfig& tc);

// Dispatch on method; random-phase baselines draw their phase set from the
// training seed.
TrainResult train_method(Method method, const Dataset& dataset, const SceneConfig& scene,
                         const RecognizerConfig& rc, const TrainConfig& tc);

// Class-probability outputs on a dataset with trained parameters. Evaluation
// noise seeds derive from `eval_seed` (distinct from training streams).
// `phases` is required for Method::RandomPhase.
std::vector<Eigen::VectorXd> predict_probs(Method method, const SceneConfig& scene,
                                           const Dataset& dataset, const RecognizerConfig& rc,
                                           const ParamStore& params, int k,
                                           std::uint64_t eval_seed, int threads = 0,
                                           const std::vector<PhaseConfig>& phases = {});

// Full adaptive episode traces for the first `limit` dataset items.
std::vector<EpisodeTrace> collect_traces(const SceneConfig& scene, const Dataset& dataset,
                                         const RecognizerConfig& rc, const ParamStore& params,
                                         int k, std::uint64_t eval_seed, int limit);

// The phase set a random-phase run uses, derived the same way train_method
// derives it.
std::vector<PhaseConfig> random_phases_for_seed(const SceneConfig& scene, int k,
                                                std::uint64_t seed);

} // namespace risrec
