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

#include "risrec/autodiff.hpp"
#include "risrec/channel.hpp"

namespace risrec {

// What the feature extractor sees of the applied phases: the (cos, sin) pair
// per element (default, continuous across the 0/2pi wrap) or the raw angles.
enum class PhaseInput { CosSin, RawAngle };

struct RecognizerConfig {
    int n_meas = 4; // complex measurement entries per step (n_tx * n_rx)
    int n_ris = 400;
    int n_classes = 10;
    int b1 = 256;          // feature width
    int b2 = 256;          // LSTM hidden width
    int head_hidden = 256; // hidden layer of the classifier / phase generator
    PhaseInput phase_input = PhaseInput::CosSin;

    static RecognizerConfig for_scene(const SceneConfig& scene, int n_classes);

    int meas_rep_len() const { return 2 * n_meas; }
    int phase_rep_len() const { return phase_input == PhaseInput::CosSin ? 2 * n_ris : n_ris; }
};

// Ordered collection of named parameter tensors. Order is the serialization
// and gradient-bookkeeping order.
class ParamStore {
  public:
    int add(std::string name, ad::Tensor value);
    int index_of(const std::string& name) const; // throws when missing
    bool contains(const std::string& name) const;
    std::size_t count() const { return tensors_.size(); }
    const std::string& name(int idx) const { return names_.at(static_cast<std::size_t>(idx)); }
    ad::Tensor& tensor(int idx) { return tensors_.at(static_cast<std::size_t>(idx)); }
    const ad::Tensor& tensor(int idx) const { return tensors_.at(static_cast<std::size_t>(idx)); }
    ad::Tensor& tensor(const std::string& name) { return tensor(index_of(name)); }
    const ad::Tensor& tensor(const std::string& name) const { return tensor(index_of(name)); }

  private:
    std::vector<std::string> names_;
    std::vector<ad::Tensor> tensors_;
};

// Seed-deterministic initialization: affine weights i.i.d. uniform on
// +-1/sqrt(fan_in), biases zero, phase angles i.i.d. uniform on [0, 2pi).
ParamStore init_adaptive_params(const RecognizerConfig& config, std::uint64_t seed);
// K trainable shared phase-angle vectors plus a classifier over the
// concatenated stacked-real measurements (length 2*K*n_meas).
ParamStore init_lisp_params(const RecognizerConfig& config, int k, std::uint64_t seed);
// Classifier of the same shape for externally fixed phases (k_meas
// measurements concatenated).
ParamStore init_fixed_classifier_params(const RecognizerConfig& config, int k_meas,
                                        std::uint64_t seed);

struct LstmState {
    Eigen::VectorXd hidden; // the state vector s_k handed to the heads
    Eigen::VectorXd cell;
    static LstmState zero(int b2);
};

struct EpisodeTrace {
    std::vector<Eigen::VectorXcd> omegas;       // applied phases, k = 1..K
    std::vector<Eigen::VectorXcd> measurements; // noisy channel estimates
    std::vector<Eigen::VectorXd> states;        // LSTM hidden per step
    Eigen::VectorXd probabilities;              // p_K over classes
};

// ---- single-step network blocks (value level) ----

// b_k = ReLU(W_m * stackreal(h_hat) + b_m + W_p * phaserep(omega) + b_p).
Eigen::VectorXd feature_extract(const RecognizerConfig& config, const ParamStore& params,
                                const Eigen::VectorXcd& h_hat, const PhaseConfig& omega);

// Standard LSTM cell (input/forget/output gates, tanh candidate).
LstmState lstm_step(const RecognizerConfig& config, const ParamStore& params,
                    const Eigen::VectorXd& features, const LstmState& state);

// Softmax class probabilities from the final state.
Eigen::VectorXd classify(const RecognizerConfig& config, const ParamStore& params,
                         const Eigen::VectorXd& state);

// Next phase configuration from the current state; exactly unit-modulus by
// construction (angles wrapped through cos/sin).
PhaseConfig generate_phase(const RecognizerConfig& config, const ParamStore& params,
                           const Eigen::VectorXd& state);

// ---- episodes ----

// Runs the K-step adaptive episode: apply the shared learned first phase,
// measure, extract, fuse, emit the next phase while k < K, classify at k = K.
// Deterministic (bitwise) for fixed inputs and seed.
EpisodeTrace run_episode(const ChannelContext& ctx, const TargetImage& sigma,
                         const RecognizerConfig& config, const ParamStore& params, int k,
                         std::uint64_t rng_seed);
EpisodeTrace run_episode(const SceneConfig& scene, const TargetImage& sigma,
                         const RecognizerConfig& config, const ParamStore& params, int k,
                         std::uint64_t rng_seed);

// Baseline with K fixed trained phases shared across targets; measurements
// are concatenated and classified in one shot.
Eigen::VectorXd run_lisp_episode(const ChannelContext& ctx, const TargetImage& sigma,
                                 const RecognizerConfig& config, const ParamStore& lisp_params,
                                 int k, std::uint64_t rng_seed);

// The phase vectors a LISP parameter set would apply (target-independent).
std::vector<PhaseConfig> lisp_phases(const ParamStore& lisp_params, int k);

// K i.i.d. uniform-angle phase configurations.
std::vector<PhaseConfig> random_phase_set(int k, int n_ris, std::uint64_t rng_seed);

// ---- tape-level builders (shared by the trainer) ----

namespace detail {

struct BoundParams {
    std::vector<ad::Value> values; // aligned with ParamStore order
    ad::Value operator[](int idx) const { return values.at(static_cast<std::size_t>(idx)); }
};

// trainable = true binds parameters as leaves (gradients flow), otherwise as
// constants (inference).
BoundParams bind_params(ad::Tape& tape, const ParamStore& params, bool trainable);

struct EpisodeInputs {
    const SensingOperator* op = nullptr;
    double noise_power_w = 0.0; // per-entry complex variance; 0 disables noise
    int k = 1;
    std::uint64_t noise_seed = 0;
    std::optional<int> label; // builds the cross-entropy loss when present
};

struct EpisodeNodes {
    std::vector<ad::Value> phase_cos;    // per step
    std::vector<ad::Value> phase_sin;    // per step
    std::vector<ad::Value> measurements; // stacked-real, per step
    std::vector<ad::Value> states;       // hidden per step
    ad::Value logits;
    ad::Value loss; // invalid unless label was given
};

EpisodeNodes build_adaptive_episode(ad::Tape& tape, const RecognizerConfig& config,
                                    const ParamStore& params, const BoundParams& bound,
                                    const EpisodeInputs& in);

// Shared-phase episode: when `angle_leaves` is non-empty those tape values
// provide the per-step angles (LISP); otherwise `fixed_phases` are applied as
// constants (random / no-RIS baselines).
EpisodeNodes build_static_phase_episode(ad::Tape& tape, const RecognizerConfig& config,
                                        const ParamStore& params, const BoundParams& bound,
                                        const std::vector<ad::Value>& angle_leaves,
                                        const std::vector<PhaseConfig>& fixed_phases,
                                        const EpisodeInputs& in);

// Draws the stacked-real measurement disturbance for one step (matches the
// complex draw order of simulate_measurement).
Eigen::VectorXd stacked_noise(int n_complex, double noise_power_w, std::uint64_t seed);

EpisodeTrace trace_from_nodes(const ad::Tape& tape, const EpisodeNodes& nodes);

} // namespace detail

} // namespace risrec
