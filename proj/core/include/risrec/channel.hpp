// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>

#include "risrec/geometry.hpp"

namespace risrec {

// Scattering-coefficient image of the region of interest, one non-negative
// coefficient per voxel, row-major.
struct TargetImage {
    Eigen::VectorXd sigma;
};

// Throws when an entry is negative or exceeds the scene's RCS bound.
void validate_target_image(const SceneConfig& scene, const TargetImage& image);

// Unit-modulus RIS phase vector.
struct PhaseConfig {
    Eigen::VectorXcd omega;

    static PhaseConfig from_angles(const Eigen::VectorXd& theta);
    // Validates |omega_i| = 1 within 1e-12.
    static PhaseConfig checked(Eigen::VectorXcd omega);
    // Skips the unit-modulus check (tests use this for degenerate inputs).
    static PhaseConfig unchecked(Eigen::VectorXcd omega);

    Eigen::VectorXd angles() const;
};

// Vectorized estimated sensing channel together with the phases it was
// measured under.
struct Measurement {
    Eigen::VectorXcd h_hat; // length n_tx * n_rx, column-major vec of the channel
    PhaseConfig omega_used;
};

// Free-space propagation matrix between two point sets: entry (i, j) is
// exp(-j*2*pi*d_ij) / (sqrt(4*pi) * d_ij) with d_ij the distance in
// wavelengths between dst[i] and src[j]. Coincident pairs throw.
Eigen::MatrixXcd propagation_matrix(const PointSet& dst, const PointSet& src);

// All pairwise propagation matrices of a scene, computed once and reused.
// Member naming: a_to_b has one row per element of b and one column per
// element of a.
struct ChannelContext {
    SceneConfig scene;
    Eigen::VectorXcd ue_to_tx;  // n_tx
    Eigen::VectorXcd ue_to_ris; // n_ris
    Eigen::VectorXcd ue_to_roi; // n_image
    Eigen::MatrixXcd ris_to_tx; // n_tx x n_ris
    Eigen::MatrixXcd roi_to_tx; // n_tx x n_image
    Eigen::MatrixXcd tx_to_ris; // n_ris x n_tx
    Eigen::MatrixXcd tx_to_roi; // n_image x n_tx
    Eigen::MatrixXcd ris_to_roi; // n_image x n_ris
    Eigen::MatrixXcd roi_to_ris; // n_ris x n_image
    Eigen::MatrixXcd ris_to_rx; // n_rx x n_ris
    Eigen::MatrixXcd roi_to_rx; // n_rx x n_image
};

ChannelContext make_channel_context(const SceneConfig& scene);

// Downlink channel TX -> UE: line-of-sight plus the four single- and
// double-bounce paths over the RIS and the target.
Eigen::VectorXcd comm_channel(const ChannelContext& ctx, const TargetImage& sigma,
                              const PhaseConfig& omega);

// Sensing channel TX -> RX (direct TX-RX path removed): the RIS was bounce,
// the target bounce, and both orders of the double bounce.
Eigen::MatrixXcd sensing_channel(const ChannelContext& ctx, const TargetImage& sigma,
                                 const PhaseConfig& omega);

// Column-major vectorization of sensing_channel; the measurement model's
// clean forward map. Contains no learnable parameters.
Eigen::VectorXcd f_phy(const ChannelContext& ctx, const TargetImage& sigma,
                       const PhaseConfig& omega);

// Convenience overloads that build the context internally.
Eigen::VectorXcd comm_channel(const SceneConfig& scene, const TargetImage& sigma,
                              const PhaseConfig& omega);
Eigen::MatrixXcd sensing_channel(const SceneConfig& scene, const TargetImage& sigma,
                                 const PhaseConfig& omega);
Eigen::VectorXcd f_phy(const SceneConfig& scene, const TargetImage& sigma,
                       const PhaseConfig& omega);

// Least-squares channel estimate from received pilot responses:
// (1/sqrt(P_t)) * received * pilots^{-1}. Pilot columns are the transmitted
// symbols; a singular pilot matrix throws.
Eigen::MatrixXcd ls_estimate(const Eigen::MatrixXcd& received, const Eigen::MatrixXcd& pilots,
                             double tx_power_w);

// Unit-power DFT pilot matrix (columns orthogonal), an alternative to the
// default identity pilots.
Eigen::MatrixXcd dft_pilots(int n);

// Noisy measurement of the sensing channel: f_phy plus i.i.d. complex
// Gaussian disturbance with per-entry variance scene.measurement_noise_w().
// Deterministic for a given seed.
Measurement simulate_measurement(const ChannelContext& ctx, const TargetImage& sigma,
                                 const PhaseConfig& omega, std::uint64_t rng_seed);
Measurement simulate_measurement(const SceneConfig& scene, const TargetImage& sigma,
                                 const PhaseConfig& omega, std::uint64_t rng_seed);

// For a fixed target the vectorized sensing channel is affine in the phase
// vector: f_phy(sigma, omega) = ris_part * omega + direct_part. Precomputing
// this pair makes per-measurement work a single matrix-vector product.
struct SensingOperator {
    Eigen::MatrixXcd ris_part;   // (n_tx*n_rx) x n_ris
    Eigen::VectorXcd direct_part; // n_tx*n_rx
};

SensingOperator make_sensing_operator(const ChannelContext& ctx, const TargetImage& sigma);

// Same operator with every RIS path removed (the no-RIS baseline): ris_part
// is all zeros and only the TX -> target -> RX term remains.
SensingOperator make_no_ris_operator(const ChannelContext& ctx, const TargetImage& sigma);

// Real block embedding [[Re, -Im], [Im, Re]] so that complex products can run
// inside the real-valued autodiff engine.
Eigen::MatrixXd stacked_real_matrix(const Eigen::MatrixXcd& m);
// [Re; Im] stacking of a complex vector.
Eigen::VectorXd stacked_real_vector(const Eigen::VectorXcd& v);

// Row-major CSV dump, each complex entry contributing a "re,im" cell pair.
void write_complex_csv(std::ostream& out, const Eigen::MatrixXcd& m);

} // namespace risrec
