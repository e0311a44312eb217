// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Test-only independent oracles: naive per-path channel summation and
// central finite differences. Kept free of the library's composition code so
// the checks stay meaningful.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "risrec/channel.hpp"
#include "risrec/recognizer.hpp"
#include "risrec/rng.hpp"

namespace risrec::testing {

inline std::complex<double> green(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    const double d = (a - b).norm();
    const double phase = -2.0 * M_PI * d;
    return std::polar(1.0 / (std::sqrt(4.0 * M_PI) * d), phase);
}

// Brute-force path summation of the downlink channel, one scalar product per
// physical path.
inline Eigen::VectorXcd oracle_comm_channel(const SceneConfig& scene, const Eigen::VectorXd& sig,
                                            const Eigen::VectorXcd& omega) {
    const PointSet tx = element_positions(scene, ArraySel::Tx);
    const PointSet ris = element_positions(scene, ArraySel::Ris);
    const PointSet roi = element_positions(scene, ArraySel::Roi);
    const Eigen::Vector3d ue = scene.ue_position;

    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(scene.n_tx);
    for (int t = 0; t < scene.n_tx; ++t) {
        std::complex<double> acc = green(tx[t], ue);
        for (int n = 0; n < scene.n_ris(); ++n) {
            acc += green(tx[t], ris[n]) * omega[n] * green(ris[n], ue);
        }
        for (int i = 0; i < scene.n_image(); ++i) {
            acc += green(tx[t], roi[i]) * sig[i] * green(roi[i], ue);
        }
        for (int i = 0; i < scene.n_image(); ++i) {
            for (int n = 0; n < scene.n_ris(); ++n) {
                acc += green(tx[t], roi[i]) * sig[i] * green(roi[i], ris[n]) * omega[n] *
                       green(ris[n], ue);
                acc += green(tx[t], ris[n]) * omega[n] * green(ris[n], roi[i]) * sig[i] *
                       green(roi[i], ue);
            }
        }
        h[t] = acc;
    }
    return h;
}

// Brute-force path summation of the sensing channel (no direct TX-RX term).
inline Eigen::MatrixXcd oracle_sensing_channel(const SceneConfig& scene,
                                               const Eigen::VectorXd& sig,
                                               const Eigen::VectorXcd& omega) {
    const PointSet tx = element_positions(scene, ArraySel::Tx);
    const PointSet rx = element_positions(scene, ArraySel::Rx);
    const PointSet ris = element_positions(scene, ArraySel::Ris);
    const PointSet roi = element_positions(scene, ArraySel::Roi);

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(scene.n_rx, scene.n_tx);
    for (int r = 0; r < scene.n_rx; ++r) {
        for (int t = 0; t < scene.n_tx; ++t) {
            std::complex<double> acc = 0.0;
            for (int n = 0; n < scene.n_ris(); ++n) {
                acc += green(rx[r], ris[n]) * omega[n] * green(ris[n], tx[t]);
            }
            for (int i = 0; i < scene.n_image(); ++i) {
                acc += green(rx[r], roi[i]) * sig[i] * green(roi[i], tx[t]);
            }
            for (int i = 0; i < scene.n_image(); ++i) {
                for (int n = 0; n < scene.n_ris(); ++n) {
                    acc += green(rx[r], roi[i]) * sig[i] * green(roi[i], ris[n]) * omega[n] *
                           green(ris[n], tx[t]);
                    acc += green(rx[r], ris[n]) * omega[n] * green(ris[n], roi[i]) * sig[i] *
                           green(roi[i], tx[t]);
                }
            }
            h(r, t) = acc;
        }
    }
    return h;
}

// Random compact scene with small array/grid sizes, deterministic per seed.
inline SceneConfig random_small_scene(std::uint64_t seed) {
    Rng rng(seed);
    SceneConfig s;
    s.n_tx = 1 + static_cast<int>(rng.next_u64() % 3);
    s.n_rx = 1 + static_cast<int>(rng.next_u64() % 3);
    s.ris_rows = 1 + static_cast<int>(rng.next_u64() % 3);
    s.ris_cols = 1 + static_cast<int>(rng.next_u64() % 3);
    s.roi_side_voxels = 1 + static_cast<int>(rng.next_u64() % 3);
    s.element_pitch = rng.next_uniform(0.4, 1.2);
    s.voxel_pitch = rng.next_uniform(0.5, 1.5);
    s.tx_position = {rng.next_uniform(15, 35), rng.next_uniform(20, 50), rng.next_uniform(20, 50)};
    s.rx_position = s.tx_position + Eigen::Vector3d(0.0, rng.next_uniform(1.5, 4.0), 0.0);
    s.roi_center = {rng.next_uniform(20, 60), 0.0, 0.0};
    s.ue_position = {rng.next_uniform(15, 40), rng.next_uniform(-50, -15), 0.0};
    return s;
}

inline Eigen::VectorXd random_sigma(int n, double bound, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s[i] = rng.next_uniform(0.0, bound);
    return s;
}

inline PhaseConfig random_phase(int n, std::uint64_t seed) {
    return random_phase_set(1, n, seed).front();
}

inline double rel_error(std::complex<double> a, std::complex<double> b) {
    const double den = std::max(std::abs(a), std::abs(b));
    return den > 0.0 ? std::abs(a - b) / den : 0.0;
}

inline double max_rel_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    double worst = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            worst = std::max(worst, rel_error(a(r, c), b(r, c)));
        }
    }
    return worst;
}

// Central finite differences of a scalar function of the parameter store.
inline std::vector<ad::Tensor> finite_difference(
    const ParamStore& base, const std::function<double(const ParamStore&)>& eval, double step) {
    std::vector<ad::Tensor> grads;
    grads.reserve(base.count());
    ParamStore work = base;
    for (std::size_t p = 0; p < base.count(); ++p) {
        ad::Tensor g = base.tensor(static_cast<int>(p));
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double saved = work.tensor(static_cast<int>(p)).data[j];
            work.tensor(static_cast<int>(p)).data[j] = saved + step;
            const double up = eval(work);
            work.tensor(static_cast<int>(p)).data[j] = saved - step;
            const double down = eval(work);
            work.tensor(static_cast<int>(p)).data[j] = saved;
            g.data[j] = (up - down) / (2.0 * step);
        }
        grads.push_back(std::move(g));
    }
    return grads;
}

// True when every gradient entry matches within max(rel_tol*|fd|, abs_floor).
inline bool gradients_match(const std::vector<ad::Tensor>& ad_grads,
                            const std::vector<ad::Tensor>& fd_grads, double rel_tol,
                            double abs_floor, double* worst_rel = nullptr) {
    bool ok = true;
    double worst = 0.0;
    for (std::size_t p = 0; p < ad_grads.size(); ++p) {
        for (std::size_t j = 0; j < ad_grads[p].size(); ++j) {
            const double a = ad_grads[p].data[j];
            const double f = fd_grads[p].data[j];
            const double err = std::abs(a - f);
            if (err > std::max(rel_tol * std::abs(f), abs_floor)) ok = false;
            if (std::abs(f) > 1e-12) worst = std::max(worst, err / std::abs(f));
        }
    }
    if (worst_rel) *worst_rel = worst;
    return ok;
}

} // namespace risrec::testing
