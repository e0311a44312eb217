// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "risrec/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <thread>

#include "risrec/rng.hpp"

namespace risrec {

namespace {

constexpr std::uint64_t kTagInit = 0x01;
constexpr std::uint64_t kTagSplit = 0x02;
constexpr std::uint64_t kTagShuffle = 0x03;
constexpr std::uint64_t kTagTrainNoise = 0x04;
constexpr std::uint64_t kTagValNoise = 0x05;
constexpr std::uint64_t kTagRandomPhases = 0x06;
constexpr int kChunk = 8; // samples per tape

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

} // namespace

TargetImage to_target_image(const std::uint8_t* raw28x28, double sigma_max) {
    Eigen::VectorXd sigma = Eigen::VectorXd::Zero(30 * 30);
    const double scale = sigma_max / 255.0;
    for (int r = 0; r < 28; ++r) {
        for (int c = 0; c < 28; ++c) {
            sigma[(r + 1) * 30 + (c + 1)] = scale * static_cast<double>(raw28x28[r * 28 + c]);
        }
    }
    return TargetImage{std::move(sigma)};
}

Dataset build_target_dataset(const ImageSet& set, double sigma_max,
                             const std::vector<int>& keep_digits, int per_class_limit) {
    if (set.rows != 28 || set.cols != 28) {
        throw std::invalid_argument("dataset: expected 28x28 images");
    }
    Dataset out;
    std::vector<int> remap(10, -1);
    if (keep_digits.empty()) {
        out.n_classes = 10;
        for (int d = 0; d < 10; ++d) remap[static_cast<std::size_t>(d)] = d;
    } else {
        out.n_classes = static_cast<int>(keep_digits.size());
        for (std::size_t i = 0; i < keep_digits.size(); ++i) {
            remap.at(static_cast<std::size_t>(keep_digits[i])) = static_cast<int>(i);
        }
    }
    std::vector<int> per_class(static_cast<std::size_t>(out.n_classes), 0);
    for (std::size_t i = 0; i < set.count(); ++i) {
        const int digit = set.labels[i];
        const int label = remap.at(static_cast<std::size_t>(digit));
        if (label < 0) continue;
        if (per_class_limit >= 0 && per_class[static_cast<std::size_t>(label)] >= per_class_limit) {
            continue;
        }
        ++per_class[static_cast<std::size_t>(label)];
        out.items.push_back(DatasetItem{to_target_image(set.image(i), sigma_max), label});
    }
    return out;
}

double cross_entropy(const std::vector<Eigen::VectorXd>& probs, const std::vector<int>& labels,
                     CrossEntropyStats* stats) {
    if (probs.size() != labels.size() || probs.empty()) {
        throw std::invalid_argument("cross_entropy: batch size mismatch or empty batch");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        double p = probs[i][labels[i]];
        if (p < 1e-30) {
            p = 1e-30;
            if (stats) ++stats->clamped;
        }
        total -= std::log(p);
    }
    return total / static_cast<double>(probs.size());
}

void adam_step(ParamStore& params, const std::vector<ad::Tensor>& grads, AdamState& state,
               double lr, double beta1, double beta2, double eps) {
    if (grads.size() != params.count()) {
        throw std::invalid_argument("adam_step: gradient count mismatch");
    }
    if (state.m.empty()) {
        state.m.resize(params.count());
        state.v.resize(params.count());
        for (std::size_t i = 0; i < params.count(); ++i) {
            const auto& t = params.tensor(static_cast<int>(i));
            state.m[i] = ad::Tensor{t.shape, std::vector<double>(t.size(), 0.0)};
            state.v[i] = ad::Tensor{t.shape, std::vector<double>(t.size(), 0.0)};
        }
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.count(); ++i) {
        auto& t = params.tensor(static_cast<int>(i));
        const auto& g = grads[i];
        if (!g.same_shape(t)) throw std::invalid_argument("adam_step: gradient shape mismatch");
        auto& m = state.m[i];
        auto& v = state.v[i];
        for (std::size_t j = 0; j < t.size(); ++j) {
            m.data[j] = beta1 * m.data[j] + (1.0 - beta1) * g.data[j];
            v.data[j] = beta2 * v.data[j] + (1.0 - beta2) * g.data[j] * g.data[j];
            const double mhat = m.data[j] / bc1;
            const double vhat = v.data[j] / bc2;
            t.data[j] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    }
}

void TrainConfig::validate() const {
    if (batch_size < 1) throw std::invalid_argument("train config: batch_size must be >= 1");
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("train config: rho must be in (0, 1]");
    if (learning_rate < 0.0) throw std::invalid_argument("train config: learning_rate must be >= 0");
    if (epochs < 1) throw std::invalid_argument("train config: epochs must be >= 1");
    if (k < 1) throw std::invalid_argument("train config: k must be >= 1");
}

DataSplit split_dataset(std::size_t total, double rho, std::uint64_t seed) {
    if (total == 0) throw std::invalid_argument("split: empty dataset");
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("split: rho must be in (0, 1]");
    std::vector<int> perm(total);
    for (std::size_t i = 0; i < total; ++i) perm[i] = static_cast<int>(i);
    Rng rng(derive_seed(seed, {kTagSplit}));
    for (std::size_t i = total; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
        std::swap(perm[i - 1], perm[j]);
    }
    std::size_t pool = static_cast<std::size_t>(std::llround(rho * static_cast<double>(total)));
    pool = std::clamp<std::size_t>(pool, 1, total);
    const std::size_t n_val = pool / 10;

    DataSplit split;
    split.val.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_val));
    split.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_val),
                       perm.begin() + static_cast<std::ptrdiff_t>(pool));
    return split;
}

std::string to_string(Method m) {
    switch (m) {
        case Method::Adaptive: return "adaptive";
        case Method::Lisp: return "lisp";
        case Method::RandomPhase: return "random";
        case Method::NoRis: return "no-ris";
    }
    return "?";
}

Method method_from_string(const std::string& name) {
    if (name == "adaptive") return Method::Adaptive;
    if (name == "lisp") return Method::Lisp;
    if (name == "random") return Method::RandomPhase;
    if (name == "no-ris" || name == "noris") return Method::NoRis;
    throw std::invalid_argument("unknown method '" + name + "'");
}

namespace {

SceneConfig apply_noise_override(SceneConfig scene, const TrainConfig& tc) {
    if (tc.rx_noise_override_dbm.has_value()) scene.rx_noise_dbm = *tc.rx_noise_override_dbm;
    return scene;
}

// Forward-model interface shared by the training loop, validation and test
// prediction. Implementations are thread-safe for concurrent const calls.
class Model {
  public:
    virtual ~Model() = default;
    virtual ad::Value build_loss(ad::Tape& tape, const detail::BoundParams& bound,
                                 const ParamStore& params, int item,
                                 std::uint64_t noise_seed) const = 0;
    virtual Eigen::VectorXd infer(const ParamStore& params, int item,
                                  std::uint64_t noise_seed) const = 0;
};

// Caches per-item sensing operators unless that would take excessive memory.
class OperatorCache {
  public:
    OperatorCache(const ChannelContext& ctx, const Dataset& data, bool no_ris)
        : ctx_(ctx), data_(data), no_ris_(no_ris) {
        const std::size_t per_item_bytes = static_cast<std::size_t>(ctx.scene.n_meas()) *
                                           static_cast<std::size_t>(ctx.scene.n_ris()) *
                                           sizeof(std::complex<double>);
        if (per_item_bytes * data.size() <= kCacheLimitBytes) {
            cache_.reserve(data.size());
            for (const auto& item : data.items) cache_.push_back(make(item.image));
        }
    }

    const SensingOperator& get(int item, SensingOperator& scratch) const {
        if (!cache_.empty()) return cache_[static_cast<std::size_t>(item)];
        scratch = make(data_.items[static_cast<std::size_t>(item)].image);
        return scratch;
    }

  private:
    static constexpr std::size_t kCacheLimitBytes = 15ull << 27; // ~2.5 GB

    SensingOperator make(const TargetImage& image) const {
        return no_ris_ ? make_no_ris_operator(ctx_, image) : make_sensing_operator(ctx_, image);
    }

    const ChannelContext& ctx_;
    const Dataset& data_;
    bool no_ris_;
    std::vector<SensingOperator> cache_;
};

class AdaptiveModel : public Model {
  public:
    AdaptiveModel(const ChannelContext& ctx, const Dataset& data, const RecognizerConfig& rc,
                  int k)
        : ctx_(ctx), data_(data), rc_(rc), k_(k), ops_(ctx, data, false),
          noise_w_(ctx.scene.measurement_noise_w()) {}

    ad::Value build_loss(ad::Tape& tape, const detail::BoundParams& bound,
                         const ParamStore& params, int item,
                         std::uint64_t noise_seed) const override {
        SensingOperator scratch;
        detail::EpisodeInputs in;
        in.op = &ops_.get(item, scratch);
        in.noise_power_w = noise_w_;
        in.k = k_;
        in.noise_seed = noise_seed;
        in.label = data_.items[static_cast<std::size_t>(item)].label;
        return detail::build_adaptive_episode(tape, rc_, params, bound, in).loss;
    }

    Eigen::VectorXd infer(const ParamStore& params, int item,
                          std::uint64_t noise_seed) const override {
        SensingOperator scratch;
        ad::Tape tape;
        const auto bound = detail::bind_params(tape, params, false);
        detail::EpisodeInputs in;
        in.op = &ops_.get(item, scratch);
        in.noise_power_w = noise_w_;
        in.k = k_;
        in.noise_seed = noise_seed;
        const auto nodes = detail::build_adaptive_episode(tape, rc_, params, bound, in);
        return ad::softmax(tape.value(nodes.logits).to_vector());
    }

  private:
    const ChannelContext& ctx_;
    const Dataset& data_;
    RecognizerConfig rc_;
    int k_;
    OperatorCache ops_;
    double noise_w_;
};

// LISP and fixed-phase baselines share the static-phase episode; the LISP
// variant reads its per-step angles from the parameter store.
class StaticPhaseModel : public Model {
  public:
    StaticPhaseModel(const ChannelContext& ctx, const Dataset& data, const RecognizerConfig& rc,
                     int k, bool trainable_angles, std::vector<PhaseConfig> fixed_phases,
                     bool no_ris)
        : ctx_(ctx), data_(data), rc_(rc), k_(k), trainable_angles_(trainable_angles),
          fixed_phases_(std::move(fixed_phases)), ops_(ctx, data, no_ris),
          noise_w_(ctx.scene.measurement_noise_w()) {}

    ad::Value build_loss(ad::Tape& tape, const detail::BoundParams& bound,
                         const ParamStore& params, int item,
                         std::uint64_t noise_seed) const override {
        SensingOperator scratch;
        detail::EpisodeInputs in;
        in.op = &ops_.get(item, scratch);
        in.noise_power_w = noise_w_;
        in.k = k_;
        in.noise_seed = noise_seed;
        in.label = data_.items[static_cast<std::size_t>(item)].label;
        const auto nodes = detail::build_static_phase_episode(
            tape, rc_, params, bound, angle_values(params, bound), fixed_phases_, in);
        return nodes.loss;
    }

    Eigen::VectorXd infer(const ParamStore& params, int item,
                          std::uint64_t noise_seed) const override {
        SensingOperator scratch;
        ad::Tape tape;
        const auto bound = detail::bind_params(tape, params, false);
        detail::EpisodeInputs in;
        in.op = &ops_.get(item, scratch);
        in.noise_power_w = noise_w_;
        in.k = k_;
        in.noise_seed = noise_seed;
        const auto nodes = detail::build_static_phase_episode(
            tape, rc_, params, bound, angle_values(params, bound), fixed_phases_, in);
        return ad::softmax(tape.value(nodes.logits).to_vector());
    }

  private:
    std::vector<ad::Value> angle_values(const ParamStore& params,
                                        const detail::BoundParams& bound) const {
        std::vector<ad::Value> values;
        if (!trainable_angles_) return values;
        values.reserve(static_cast<std::size_t>(k_));
        for (int i = 0; i < k_; ++i) {
            values.push_back(bound[params.index_of("lisp.angles." + std::to_string(i))]);
        }
        return values;
    }

    const ChannelContext& ctx_;
    const Dataset& data_;
    RecognizerConfig rc_;
    int k_;
    bool trainable_angles_;
    std::vector<PhaseConfig> fixed_phases_;
    OperatorCache ops_;
    double noise_w_;
};

// Per-worker gradient/loss accumulation over strided chunks; reduction runs
// in worker order so results are deterministic for a fixed thread count.
struct BatchAccum {
    std::vector<ad::Tensor> grads;
    double loss_sum = 0.0;
};

void accumulate_batch(const Model& model, const ParamStore& params,
                      const std::vector<int>& batch, int epoch, const TrainConfig& tc,
                      int n_threads, std::vector<ad::Tensor>& grads_out, double& loss_out) {
    const int n = static_cast<int>(batch.size());
    const int n_chunks = (n + kChunk - 1) / kChunk;
    const int workers = std::max(1, std::min(n_threads, n_chunks));

    std::vector<BatchAccum> accum(static_cast<std::size_t>(workers));
    for (auto& a : accum) {
        a.grads.resize(params.count());
        for (std::size_t i = 0; i < params.count(); ++i) {
            const auto& t = params.tensor(static_cast<int>(i));
            a.grads[i] = ad::Tensor{t.shape, std::vector<double>(t.size(), 0.0)};
        }
    }

    auto work = [&](int w) {
        BatchAccum& acc = accum[static_cast<std::size_t>(w)];
        for (int c = w; c < n_chunks; c += workers) {
            const int begin = c * kChunk;
            const int end = std::min(n, begin + kChunk);
            ad::Tape tape;
            const auto bound = detail::bind_params(tape, params, true);
            ad::Value total;
            for (int s = begin; s < end; ++s) {
                const int item = batch[static_cast<std::size_t>(s)];
                const std::uint64_t noise_seed =
                    derive_seed(tc.seed, {kTagTrainNoise, static_cast<std::uint64_t>(epoch),
                                          static_cast<std::uint64_t>(item)});
                const ad::Value loss = model.build_loss(tape, bound, params, item, noise_seed);
                acc.loss_sum += tape.value(loss)[0];
                total = total.valid() ? tape.add(total, loss) : loss;
            }
            tape.backward(total);
            for (std::size_t i = 0; i < params.count(); ++i) {
                const ad::Tensor& g = tape.grad(bound[static_cast<int>(i)]);
                auto& dst = acc.grads[i];
                for (std::size_t j = 0; j < dst.size(); ++j) dst.data[j] += g.data[j];
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    double loss_sum = 0.0;
    for (std::size_t i = 0; i < params.count(); ++i) {
        auto& dst = grads_out[i];
        std::fill(dst.data.begin(), dst.data.end(), 0.0);
    }
    for (const auto& acc : accum) {
        loss_sum += acc.loss_sum;
        for (std::size_t i = 0; i < params.count(); ++i) {
            auto& dst = grads_out[i];
            for (std::size_t j = 0; j < dst.size(); ++j) dst.data[j] += acc.grads[i].data[j];
        }
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& g : grads_out) {
        for (double& v : g.data) v *= inv;
    }
    loss_out = loss_sum * inv;
}

std::vector<Eigen::VectorXd> infer_many(const Model& model, const ParamStore& params,
                                        const std::vector<int>& items, int n_threads,
                                        std::uint64_t base_seed, std::uint64_t tag) {
    std::vector<Eigen::VectorXd> probs(items.size());
    const int workers = std::max(1, std::min<int>(n_threads, static_cast<int>(items.size())));
    auto work = [&](int w) {
        for (std::size_t i = static_cast<std::size_t>(w); i < items.size();
             i += static_cast<std::size_t>(workers)) {
            const std::uint64_t seed =
                derive_seed(base_seed, {tag, static_cast<std::uint64_t>(items[i])});
            probs[i] = model.infer(params, items[i], seed);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    return probs;
}

double prediction_accuracy(const std::vector<Eigen::VectorXd>& probs,
                           const std::vector<int>& labels) {
    int correct = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        Eigen::Index best = 0;
        probs[i].maxCoeff(&best); // Eigen returns the lowest tied index
        if (static_cast<int>(best) == labels[i]) ++correct;
    }
    return probs.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(probs.size());
}

TrainResult run_training(const Model& model, ParamStore params, const Dataset& dataset,
                         const TrainConfig& tc) {
    tc.validate();
    const int threads = resolve_threads(tc.threads);
    const DataSplit split = split_dataset(dataset.size(), tc.rho, tc.seed);
    if (split.train.empty()) throw std::invalid_argument("train: empty training split");

    std::vector<int> val_labels;
    val_labels.reserve(split.val.size());
    for (int idx : split.val) val_labels.push_back(dataset.items[static_cast<std::size_t>(idx)].label);

    std::vector<ad::Tensor> grads(params.count());
    for (std::size_t i = 0; i < params.count(); ++i) {
        const auto& t = params.tensor(static_cast<int>(i));
        grads[i] = ad::Tensor{t.shape, std::vector<double>(t.size(), 0.0)};
    }

    AdamState adam;
    TrainResult result;
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<int> order = split.train;
    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
        // fresh shuffle per epoch
        Rng shuffle_rng(derive_seed(tc.seed, {kTagShuffle, static_cast<std::uint64_t>(epoch)}));
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(shuffle_rng.next_u64() % i);
            std::swap(order[i - 1], order[j]);
        }

        double lr = tc.learning_rate;
        if (tc.cosine_lr && tc.epochs > 1) {
            lr *= 0.5 * (1.0 + std::cos(M_PI * static_cast<double>(epoch) /
                                        static_cast<double>(tc.epochs - 1)));
        }

        double loss_sum = 0.0;
        int n_batches = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(tc.batch_size)) {
            const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(tc.batch_size));
            const std::vector<int> batch(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                         order.begin() + static_cast<std::ptrdiff_t>(end));
            double batch_loss = 0.0;
            accumulate_batch(model, params, batch, epoch, tc, threads, grads, batch_loss);
            if (!std::isfinite(batch_loss)) {
                throw std::runtime_error("train: non-finite loss in epoch " +
                                         std::to_string(epoch) + ", batch " +
                                         std::to_string(n_batches));
            }
            adam_step(params, grads, adam, lr);
            loss_sum += batch_loss;
            ++n_batches;
        }

        EpochMetrics m;
        m.epoch = epoch;
        m.train_loss = loss_sum / static_cast<double>(n_batches);

        if (!split.val.empty()) {
            const auto val_probs =
                infer_many(model, params, split.val, threads,
                           derive_seed(tc.seed, {kTagValNoise, static_cast<std::uint64_t>(epoch)}),
                           kTagValNoise);
            m.val_loss = cross_entropy(val_probs, val_labels);
            m.val_eta = prediction_accuracy(val_probs, val_labels);
        } else {
            m.val_loss = m.train_loss;
            m.val_eta = 0.0;
        }
        m.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.history.push_back(m);

        const bool better = result.best_epoch < 0 || m.val_eta > result.best_val_eta ||
                            (m.val_eta == result.best_val_eta && m.val_loss < result.best_val_loss);
        if (better) {
            result.best_epoch = epoch;
            result.best_val_eta = m.val_eta;
            result.best_val_loss = m.val_loss;
            result.best_params = params;
        }
    }
    return result;
}

} // namespace

TrainResult train(const Dataset& dataset, const SceneConfig& scene, const RecognizerConfig& rc,
                  const TrainConfig& tc) {
    const SceneConfig effective = apply_noise_override(scene, tc);
    const ChannelContext ctx = make_channel_context(effective);
    const AdaptiveModel model(ctx, dataset, rc, tc.k);
    ParamStore params = init_adaptive_params(rc, derive_seed(tc.seed, {kTagInit}));
    return run_training(model, std::move(params), dataset, tc);
}

TrainResult train_lisp(const Dataset& dataset, const SceneConfig& scene,
                       const RecognizerConfig& rc, const TrainConfig& tc) {
    const SceneConfig effective = apply_noise_override(scene, tc);
    const ChannelContext ctx = make_channel_context(effective);
    const StaticPhaseModel model(ctx, dataset, rc, tc.k, true, {}, false);
    ParamStore params = init_lisp_params(rc, tc.k, derive_seed(tc.seed, {kTagInit}));
    return run_training(model, std::move(params), dataset, tc);
}

TrainResult train_fixed_phase(const Dataset& dataset, const SceneConfig& scene,
                              const RecognizerConfig& rc, const TrainConfig& tc,
                              const std::vector<PhaseConfig>& phases) {
    if (phases.empty()) throw std::invalid_argument("train_fixed_phase: empty phase list");
    if (static_cast<int>(phases.size()) != tc.k) {
        throw std::invalid_argument("train_fixed_phase: need one phase per measurement");
    }
    const SceneConfig effective = apply_noise_override(scene, tc);
    const ChannelContext ctx = make_channel_context(effective);
    const StaticPhaseModel model(ctx, dataset, rc, tc.k, false, phases, false);
    ParamStore params = init_fixed_classifier_params(rc, tc.k, derive_seed(tc.seed, {kTagInit}));
    return run_training(model, std::move(params), dataset, tc);
}

TrainResult train_no_ris(const Dataset& dataset, const SceneConfig& scene,
                         const RecognizerConfig& rc, const TrainConfig& tc) {
    const SceneConfig effective = apply_noise_override(scene, tc);
    const ChannelContext ctx = make_channel_context(effective);
    // a single measurement; the phase value is irrelevant with the RIS absent
    const std::vector<PhaseConfig> ones = {
        PhaseConfig::from_angles(Eigen::VectorXd::Zero(effective.n_ris()))};
    TrainConfig tc1 = tc;
    tc1.k = 1;
    const StaticPhaseModel model(ctx, dataset, rc, 1, false, ones, true);
    ParamStore params = init_fixed_classifier_params(rc, 1, derive_seed(tc.seed, {kTagInit}));
    return run_training(model, std::move(params), dataset, tc1);
}

std::vector<PhaseConfig> random_phases_for_seed(const SceneConfig& scene, int k,
                                                std::uint64_t seed) {
    return random_phase_set(k, scene.n_ris(), derive_seed(seed, {kTagRandomPhases}));
}

TrainResult train_method(Method method, const Dataset& dataset, const SceneConfig& scene,
                         const RecognizerConfig& rc, const TrainConfig& tc) {
    switch (method) {
        case Method::Adaptive:
            return train(dataset, scene, rc, tc);
        case Method::Lisp:
            return train_lisp(dataset, scene, rc, tc);
        case Method::RandomPhase:
            return train_fixed_phase(dataset, scene, rc, tc,
                                     random_phases_for_seed(scene, tc.k, tc.seed));
        case Method::NoRis:
            return train_no_ris(dataset, scene, rc, tc);
    }
    throw std::invalid_argument("train_method: unknown method");
}

std::vector<Eigen::VectorXd> predict_probs(Method method, const SceneConfig& scene,
                                           const Dataset& dataset, const RecognizerConfig& rc,
                                           const ParamStore& params, int k,
                                           std::uint64_t eval_seed, int threads,
                                           const std::vector<PhaseConfig>& phases) {
    const ChannelContext ctx = make_channel_context(scene);
    std::unique_ptr<Model> model;
    switch (method) {
        case Method::Adaptive:
            model = std::make_unique<AdaptiveModel>(ctx, dataset, rc, k);
            break;
        case Method::Lisp:
            model = std::make_unique<StaticPhaseModel>(ctx, dataset, rc, k, true,
                                                       std::vector<PhaseConfig>{}, false);
            break;
        case Method::RandomPhase:
            if (static_cast<int>(phases.size()) != k) {
                throw std::invalid_argument("predict_probs: random method needs k phases");
            }
            model = std::make_unique<StaticPhaseModel>(ctx, dataset, rc, k, false, phases, false);
            break;
        case Method::NoRis: {
            const std::vector<PhaseConfig> ones = {
                PhaseConfig::from_angles(Eigen::VectorXd::Zero(scene.n_ris()))};
            model = std::make_unique<StaticPhaseModel>(ctx, dataset, rc, 1, false, ones, true);
            k = 1;
            break;
        }
    }
    std::vector<int> items(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) items[i] = static_cast<int>(i);
    return infer_many(*model, params, items, resolve_threads(threads), eval_seed, 0x0e);
}

std::vector<EpisodeTrace> collect_traces(const SceneConfig& scene, const Dataset& dataset,
                                         const RecognizerConfig& rc, const ParamStore& params,
                                         int k, std::uint64_t eval_seed, int limit) {
    const ChannelContext ctx = make_channel_context(scene);
    std::vector<EpisodeTrace> traces;
    const std::size_t n = std::min<std::size_t>(dataset.size(), static_cast<std::size_t>(limit));
    traces.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t seed = derive_seed(eval_seed, {0x0e, static_cast<std::uint64_t>(i)});
        traces.push_back(run_episode(ctx, dataset.items[i].image, rc, params, k, seed));
    }
    return traces;
}

} // namespace risrec
