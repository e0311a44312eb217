// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "risrec/recognizer.hpp"

#include <cmath>
#include <stdexcept>

#include "risrec/rng.hpp"

namespace risrec {

RecognizerConfig RecognizerConfig::for_scene(const SceneConfig& scene, int n_classes) {
    RecognizerConfig config;
    config.n_meas = scene.n_meas();
    config.n_ris = scene.n_ris();
    config.n_classes = n_classes;
    return config;
}

int ParamStore::add(std::string name, ad::Tensor value) {
    if (contains(name)) throw std::invalid_argument("param store: duplicate name '" + name + "'");
    names_.push_back(std::move(name));
    tensors_.push_back(std::move(value));
    return static_cast<int>(tensors_.size() - 1);
}

int ParamStore::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return static_cast<int>(i);
    }
    throw std::invalid_argument("param store: no parameter named '" + name + "'");
}

bool ParamStore::contains(const std::string& name) const {
    for (const auto& n : names_) {
        if (n == name) return true;
    }
    return false;
}

namespace {

ad::Tensor uniform_weights(std::size_t rows, std::size_t cols, Rng& rng) {
    ad::Tensor t = ad::Tensor::zeros_matrix(rows, cols);
    const double bound = 1.0 / std::sqrt(static_cast<double>(cols)); // fan-in
    for (double& v : t.data) v = rng.next_uniform(-bound, bound);
    return t;
}

ad::Tensor uniform_angles(std::size_t n, Rng& rng) {
    ad::Tensor t = ad::Tensor::zeros_vector(n);
    for (double& v : t.data) v = rng.next_uniform(0.0, 2.0 * M_PI);
    return t;
}

void add_affine(ParamStore& store, const std::string& prefix, std::size_t out, std::size_t in,
                Rng& rng) {
    store.add(prefix + ".w", uniform_weights(out, in, rng));
    store.add(prefix + ".b", ad::Tensor::zeros_vector(out));
}

void add_classifier_head(ParamStore& store, const RecognizerConfig& config, std::size_t in,
                         Rng& rng) {
    add_affine(store, "cls.l1", static_cast<std::size_t>(config.head_hidden), in, rng);
    add_affine(store, "cls.l2", static_cast<std::size_t>(config.n_classes),
               static_cast<std::size_t>(config.head_hidden), rng);
}

} // namespace

ParamStore init_adaptive_params(const RecognizerConfig& config, std::uint64_t seed) {
    Rng rng(derive_seed(seed, {0x1717}));
    ParamStore store;
    const auto b1 = static_cast<std::size_t>(config.b1);
    const auto b2 = static_cast<std::size_t>(config.b2);
    add_affine(store, "fea.meas", b1, static_cast<std::size_t>(config.meas_rep_len()), rng);
    add_affine(store, "fea.phase", b1, static_cast<std::size_t>(config.phase_rep_len()), rng);
    store.add("lstm.w_in", uniform_weights(4 * b2, b1, rng));
    store.add("lstm.w_rec", uniform_weights(4 * b2, b2, rng));
    store.add("lstm.bias", ad::Tensor::zeros_vector(4 * b2));
    add_classifier_head(store, config, b2, rng);
    add_affine(store, "gen.l1", static_cast<std::size_t>(config.head_hidden), b2, rng);
    add_affine(store, "gen.l2", static_cast<std::size_t>(config.n_ris),
               static_cast<std::size_t>(config.head_hidden), rng);
    store.add("omega1.angles", uniform_angles(static_cast<std::size_t>(config.n_ris), rng));
    return store;
}

ParamStore init_lisp_params(const RecognizerConfig& config, int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("lisp params: k must be >= 1");
    Rng rng(derive_seed(seed, {0x2424}));
    ParamStore store;
    for (int i = 0; i < k; ++i) {
        store.add("lisp.angles." + std::to_string(i),
                  uniform_angles(static_cast<std::size_t>(config.n_ris), rng));
    }
    add_classifier_head(store, config,
                        static_cast<std::size_t>(2 * k * config.n_meas), rng);
    return store;
}

ParamStore init_fixed_classifier_params(const RecognizerConfig& config, int k_meas,
                                        std::uint64_t seed) {
    if (k_meas < 1) throw std::invalid_argument("classifier params: k_meas must be >= 1");
    Rng rng(derive_seed(seed, {0x3535}));
    ParamStore store;
    add_classifier_head(store, config,
                        static_cast<std::size_t>(2 * k_meas * config.n_meas), rng);
    return store;
}

LstmState LstmState::zero(int b2) {
    return LstmState{Eigen::VectorXd::Zero(b2), Eigen::VectorXd::Zero(b2)};
}

namespace detail {

BoundParams bind_params(ad::Tape& tape, const ParamStore& params, bool trainable) {
    BoundParams bound;
    bound.values.reserve(params.count());
    for (std::size_t i = 0; i < params.count(); ++i) {
        const auto& t = params.tensor(static_cast<int>(i));
        bound.values.push_back(trainable ? tape.leaf(t) : tape.constant(t));
    }
    return bound;
}

Eigen::VectorXd stacked_noise(int n_complex, double noise_power_w, std::uint64_t seed) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * n_complex);
    if (noise_power_w <= 0.0) return out;
    Rng rng(seed);
    for (int i = 0; i < n_complex; ++i) {
        const std::complex<double> z = rng.next_cnormal(noise_power_w);
        out[i] = z.real();
        out[i + n_complex] = z.imag();
    }
    return out;
}

namespace {

struct AdaptiveRefs {
    ad::Value fea_meas_w, fea_meas_b, fea_phase_w, fea_phase_b;
    ad::Value lstm_w_in, lstm_w_rec, lstm_bias;
    ad::Value cls_w1, cls_b1, cls_w2, cls_b2;
    ad::Value gen_w1, gen_b1, gen_w2, gen_b2;
    ad::Value omega1_angles;
};

AdaptiveRefs resolve_adaptive(const ParamStore& params, const BoundParams& bound) {
    AdaptiveRefs r;
    r.fea_meas_w = bound[params.index_of("fea.meas.w")];
    r.fea_meas_b = bound[params.index_of("fea.meas.b")];
    r.fea_phase_w = bound[params.index_of("fea.phase.w")];
    r.fea_phase_b = bound[params.index_of("fea.phase.b")];
    r.lstm_w_in = bound[params.index_of("lstm.w_in")];
    r.lstm_w_rec = bound[params.index_of("lstm.w_rec")];
    r.lstm_bias = bound[params.index_of("lstm.bias")];
    r.cls_w1 = bound[params.index_of("cls.l1.w")];
    r.cls_b1 = bound[params.index_of("cls.l1.b")];
    r.cls_w2 = bound[params.index_of("cls.l2.w")];
    r.cls_b2 = bound[params.index_of("cls.l2.b")];
    r.gen_w1 = bound[params.index_of("gen.l1.w")];
    r.gen_b1 = bound[params.index_of("gen.l1.b")];
    r.gen_w2 = bound[params.index_of("gen.l2.w")];
    r.gen_b2 = bound[params.index_of("gen.l2.b")];
    r.omega1_angles = bound[params.index_of("omega1.angles")];
    return r;
}

ad::Value feature_node(ad::Tape& tape, const AdaptiveRefs& r, ad::Value meas_rep,
                       ad::Value phase_feat) {
    const ad::Value m = ad::affine(tape, r.fea_meas_w, meas_rep, r.fea_meas_b);
    const ad::Value p = ad::affine(tape, r.fea_phase_w, phase_feat, r.fea_phase_b);
    return tape.relu(tape.add(m, p));
}

struct LstmNodes {
    ad::Value h, c;
};

LstmNodes lstm_node(ad::Tape& tape, ad::Value w_in, ad::Value w_rec, ad::Value bias, int b2,
                    ad::Value x, const LstmNodes& prev) {
    const auto n = static_cast<std::size_t>(b2);
    const ad::Value pre =
        tape.add(tape.add(tape.matmul(w_in, x), tape.matmul(w_rec, prev.h)), bias);
    const ad::Value gate_i = tape.sigmoid(tape.slice(pre, 0, n));
    const ad::Value gate_f = tape.sigmoid(tape.slice(pre, n, n));
    const ad::Value cand = tape.tanh(tape.slice(pre, 2 * n, n));
    const ad::Value gate_o = tape.sigmoid(tape.slice(pre, 3 * n, n));
    const ad::Value c = tape.add(tape.mul(gate_f, prev.c), tape.mul(gate_i, cand));
    const ad::Value h = tape.mul(gate_o, tape.tanh(c));
    return {h, c};
}

ad::Value head_node(ad::Tape& tape, ad::Value w1, ad::Value b1, ad::Value w2, ad::Value b2,
                    ad::Value x) {
    return ad::affine(tape, w2, tape.relu(ad::affine(tape, w1, x, b1)), b2);
}

// Stacked-real physics constants, hoisted once per episode.
struct PhysicsNodes {
    ad::Value ris_part;
    ad::Value direct_part;
    int n_complex = 0;
};

PhysicsNodes physics_nodes(ad::Tape& tape, const SensingOperator& op) {
    return {tape.constant_matrix(stacked_real_matrix(op.ris_part)),
            tape.constant_vector(stacked_real_vector(op.direct_part)),
            static_cast<int>(op.direct_part.size())};
}

// One noisy stacked-real measurement under the given phase representation.
ad::Value measurement_node(ad::Tape& tape, const PhysicsNodes& phys, ad::Value phase_rep,
                           double noise_power_w, std::uint64_t step_seed) {
    ad::Value meas = tape.add(tape.matmul(phys.ris_part, phase_rep), phys.direct_part);
    if (noise_power_w > 0.0) {
        meas = tape.add(meas, tape.constant_vector(
                                  stacked_noise(phys.n_complex, noise_power_w, step_seed)));
    }
    return meas;
}

} // namespace

EpisodeNodes build_adaptive_episode(ad::Tape& tape, const RecognizerConfig& config,
                                    const ParamStore& params, const BoundParams& bound,
                                    const EpisodeInputs& in) {
    if (in.k < 1) throw std::invalid_argument("episode: k must be >= 1");
    const AdaptiveRefs r = resolve_adaptive(params, bound);
    const PhysicsNodes phys = physics_nodes(tape, *in.op);
    EpisodeNodes out;

    LstmNodes state{tape.constant(ad::Tensor::zeros_vector(static_cast<std::size_t>(config.b2))),
                    tape.constant(ad::Tensor::zeros_vector(static_cast<std::size_t>(config.b2)))};
    ad::Value angles = r.omega1_angles;
    for (int k = 0; k < in.k; ++k) {
        const auto [c, s] = ad::phase_map(tape, angles);
        out.phase_cos.push_back(c);
        out.phase_sin.push_back(s);
        const ad::Value phase_rep = tape.concat(c, s);
        const ad::Value phase_feat =
            config.phase_input == PhaseInput::CosSin ? phase_rep : angles;

        const ad::Value meas = measurement_node(tape, phys, phase_rep, in.noise_power_w,
                                                derive_seed(in.noise_seed, {0x57e9, static_cast<std::uint64_t>(k)}));
        out.measurements.push_back(meas);

        const ad::Value features = feature_node(tape, r, meas, phase_feat);
        state = lstm_node(tape, r.lstm_w_in, r.lstm_w_rec, r.lstm_bias, config.b2, features, state);
        out.states.push_back(state.h);

        if (k + 1 < in.k) {
            angles = head_node(tape, r.gen_w1, r.gen_b1, r.gen_w2, r.gen_b2, state.h);
        }
    }
    out.logits = head_node(tape, r.cls_w1, r.cls_b1, r.cls_w2, r.cls_b2, state.h);
    if (in.label.has_value()) {
        out.loss = tape.softmax_cross_entropy(out.logits, *in.label);
    }
    return out;
}

EpisodeNodes build_static_phase_episode(ad::Tape& tape, const RecognizerConfig& config,
                                        const ParamStore& params, const BoundParams& bound,
                                        const std::vector<ad::Value>& angle_values,
                                        const std::vector<PhaseConfig>& fixed_phases,
                                        const EpisodeInputs& in) {
    if (in.k < 1) throw std::invalid_argument("episode: k must be >= 1");
    const bool trainable_angles = !angle_values.empty();
    if (trainable_angles && static_cast<int>(angle_values.size()) != in.k) {
        throw std::invalid_argument("episode: need one angle vector per step");
    }
    if (!trainable_angles && static_cast<int>(fixed_phases.size()) != in.k) {
        throw std::invalid_argument("episode: need one fixed phase per step");
    }

    (void)config;
    EpisodeNodes out;
    const PhysicsNodes phys = physics_nodes(tape, *in.op);
    ad::Value all_meas;
    for (int k = 0; k < in.k; ++k) {
        ad::Value phase_rep;
        if (trainable_angles) {
            const auto [c, s] = ad::phase_map(tape, angle_values[static_cast<std::size_t>(k)]);
            out.phase_cos.push_back(c);
            out.phase_sin.push_back(s);
            phase_rep = tape.concat(c, s);
        } else {
            const auto& w = fixed_phases[static_cast<std::size_t>(k)].omega;
            const ad::Value c = tape.constant_vector(w.real());
            const ad::Value s = tape.constant_vector(w.imag());
            out.phase_cos.push_back(c);
            out.phase_sin.push_back(s);
            phase_rep = tape.constant_vector(stacked_real_vector(w));
        }
        const ad::Value meas = measurement_node(tape, phys, phase_rep, in.noise_power_w,
                                                derive_seed(in.noise_seed, {0x57e9, static_cast<std::uint64_t>(k)}));
        out.measurements.push_back(meas);
        all_meas = (k == 0) ? meas : tape.concat(all_meas, meas);
    }

    const ad::Value w1 = bound[params.index_of("cls.l1.w")];
    const ad::Value b1 = bound[params.index_of("cls.l1.b")];
    const ad::Value w2 = bound[params.index_of("cls.l2.w")];
    const ad::Value b2 = bound[params.index_of("cls.l2.b")];
    out.logits = head_node(tape, w1, b1, w2, b2, all_meas);
    if (in.label.has_value()) {
        out.loss = tape.softmax_cross_entropy(out.logits, *in.label);
    }
    return out;
}

EpisodeTrace trace_from_nodes(const ad::Tape& tape, const EpisodeNodes& nodes) {
    EpisodeTrace trace;
    const std::size_t k = nodes.measurements.size();
    trace.omegas.reserve(k);
    trace.measurements.reserve(k);
    trace.states.reserve(nodes.states.size());
    for (std::size_t i = 0; i < k; ++i) {
        const Eigen::VectorXd c = tape.value(nodes.phase_cos[i]).to_vector();
        const Eigen::VectorXd s = tape.value(nodes.phase_sin[i]).to_vector();
        Eigen::VectorXcd omega(c.size());
        omega.real() = c;
        omega.imag() = s;
        trace.omegas.push_back(std::move(omega));

        const Eigen::VectorXd m = tape.value(nodes.measurements[i]).to_vector();
        const Eigen::Index half = m.size() / 2;
        Eigen::VectorXcd h(half);
        h.real() = m.head(half);
        h.imag() = m.tail(half);
        trace.measurements.push_back(std::move(h));
    }
    for (const auto& s : nodes.states) {
        trace.states.push_back(tape.value(s).to_vector());
    }
    trace.probabilities = ad::softmax(tape.value(nodes.logits).to_vector());
    return trace;
}

} // namespace detail

// ---- value-level blocks ----

Eigen::VectorXd feature_extract(const RecognizerConfig& config, const ParamStore& params,
                                const Eigen::VectorXcd& h_hat, const PhaseConfig& omega) {
    if (h_hat.size() != config.n_meas) throw std::invalid_argument("feature_extract: bad measurement length");
    if (omega.omega.size() != config.n_ris) throw std::invalid_argument("feature_extract: bad phase length");
    ad::Tape tape;
    const auto bound = detail::bind_params(tape, params, false);
    const ad::Value meas = tape.constant_vector(stacked_real_vector(h_hat));
    const ad::Value phase_feat =
        config.phase_input == PhaseInput::CosSin
            ? tape.constant_vector(stacked_real_vector(omega.omega))
            : tape.constant_vector(omega.angles());
    const ad::Value m = ad::affine(tape, bound[params.index_of("fea.meas.w")], meas,
                                   bound[params.index_of("fea.meas.b")]);
    const ad::Value p = ad::affine(tape, bound[params.index_of("fea.phase.w")], phase_feat,
                                   bound[params.index_of("fea.phase.b")]);
    return tape.value(tape.relu(tape.add(m, p))).to_vector();
}

LstmState lstm_step(const RecognizerConfig& config, const ParamStore& params,
                    const Eigen::VectorXd& features, const LstmState& state) {
    if (features.size() != config.b1) throw std::invalid_argument("lstm_step: bad feature length");
    if (state.hidden.size() != config.b2 || state.cell.size() != config.b2) {
        throw std::invalid_argument("lstm_step: bad state length");
    }
    ad::Tape tape;
    const auto bound = detail::bind_params(tape, params, false);
    detail::LstmNodes prev{tape.constant_vector(state.hidden), tape.constant_vector(state.cell)};
    const auto next = detail::lstm_node(tape, bound[params.index_of("lstm.w_in")],
                                        bound[params.index_of("lstm.w_rec")],
                                        bound[params.index_of("lstm.bias")], config.b2,
                                        tape.constant_vector(features), prev);
    return LstmState{tape.value(next.h).to_vector(), tape.value(next.c).to_vector()};
}

Eigen::VectorXd classify(const RecognizerConfig& config, const ParamStore& params,
                         const Eigen::VectorXd& state) {
    if (state.size() != config.b2) throw std::invalid_argument("classify: bad state length");
    ad::Tape tape;
    const auto bound = detail::bind_params(tape, params, false);
    const ad::Value logits = detail::head_node(
        tape, bound[params.index_of("cls.l1.w")], bound[params.index_of("cls.l1.b")],
        bound[params.index_of("cls.l2.w")], bound[params.index_of("cls.l2.b")],
        tape.constant_vector(state));
    return ad::softmax(tape.value(logits).to_vector());
}

PhaseConfig generate_phase(const RecognizerConfig& config, const ParamStore& params,
                           const Eigen::VectorXd& state) {
    if (state.size() != config.b2) throw std::invalid_argument("generate_phase: bad state length");
    ad::Tape tape;
    const auto bound = detail::bind_params(tape, params, false);
    const ad::Value angles = detail::head_node(
        tape, bound[params.index_of("gen.l1.w")], bound[params.index_of("gen.l1.b")],
        bound[params.index_of("gen.l2.w")], bound[params.index_of("gen.l2.b")],
        tape.constant_vector(state));
    return PhaseConfig::from_angles(tape.value(angles).to_vector());
}

// ---- episodes ----

EpisodeTrace run_episode(const ChannelContext& ctx, const TargetImage& sigma,
                         const RecognizerConfig& config, const ParamStore& params, int k,
                         std::uint64_t rng_seed) {
    const SensingOperator op = make_sensing_operator(ctx, sigma);
    ad::Tape tape;
    const auto bound = detail::bind_params(tape, params, false);
    detail::EpisodeInputs in;
    in.op = &op;
    in.noise_power_w = ctx.scene.measurement_noise_w();
    in.k = k;
    in.noise_seed = rng_seed;
    const auto nodes = detail::build_adaptive_episode(tape, config, params, bound, in);
    return detail::trace_from_nodes(tape, nodes);
}

EpisodeTrace run_episode(const SceneConfig& scene, const TargetImage& sigma,
                         const RecognizerConfig& config, const ParamStore& params, int k,
                         std::uint64_t rng_seed) {
    return run_episode(make_channel_context(scene), sigma, config, params, k, rng_seed);
}

Eigen::VectorXd run_lisp_episode(const ChannelContext& ctx, const TargetImage& sigma,
                                 const RecognizerConfig& config, const ParamStore& lisp_params,
                                 int k, std::uint64_t rng_seed) {
    const SensingOperator op = make_sensing_operator(ctx, sigma);
    ad::Tape tape;
    const auto bound = detail::bind_params(tape, lisp_params, false);
    std::vector<ad::Value> angle_values;
    angle_values.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        angle_values.push_back(bound[lisp_params.index_of("lisp.angles." + std::to_string(i))]);
    }
    detail::EpisodeInputs in;
    in.op = &op;
    in.noise_power_w = ctx.scene.measurement_noise_w();
    in.k = k;
    in.noise_seed = rng_seed;
    const auto nodes =
        detail::build_static_phase_episode(tape, config, lisp_params, bound, angle_values, {}, in);
    return ad::softmax(tape.value(nodes.logits).to_vector());
}

std::vector<PhaseConfig> lisp_phases(const ParamStore& lisp_params, int k) {
    std::vector<PhaseConfig> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        out.push_back(PhaseConfig::from_angles(
            lisp_params.tensor("lisp.angles." + std::to_string(i)).to_vector()));
    }
    return out;
}

std::vector<PhaseConfig> random_phase_set(int k, int n_ris, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    std::vector<PhaseConfig> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd theta(n_ris);
        for (int n = 0; n < n_ris; ++n) theta[n] = rng.next_uniform(0.0, 2.0 * M_PI);
        out.push_back(PhaseConfig::from_angles(theta));
    }
    return out;
}

} // namespace risrec
