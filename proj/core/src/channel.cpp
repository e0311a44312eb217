// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "risrec/channel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "risrec/rng.hpp"

namespace risrec {

void validate_target_image(const SceneConfig& scene, const TargetImage& image) {
    if (image.sigma.size() != scene.n_image()) {
        throw std::invalid_argument("target image: expected " + std::to_string(scene.n_image()) +
                                    " voxels, got " + std::to_string(image.sigma.size()));
    }
    const double bound = scene.sigma_max();
    for (Eigen::Index i = 0; i < image.sigma.size(); ++i) {
        const double v = image.sigma[i];
        if (!(v >= 0.0 && v <= bound + 1e-12)) {
            throw std::invalid_argument("target image: voxel " + std::to_string(i) +
                                        " outside [0, " + std::to_string(bound) + "]");
        }
    }
}

PhaseConfig PhaseConfig::from_angles(const Eigen::VectorXd& theta) {
    Eigen::VectorXcd omega(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        omega[i] = std::complex<double>(std::cos(theta[i]), std::sin(theta[i]));
    }
    return PhaseConfig{std::move(omega)};
}

PhaseConfig PhaseConfig::checked(Eigen::VectorXcd omega) {
    for (Eigen::Index i = 0; i < omega.size(); ++i) {
        if (std::abs(std::abs(omega[i]) - 1.0) > 1e-12) {
            throw std::invalid_argument("phase config: element " + std::to_string(i) +
                                        " is not unit-modulus");
        }
    }
    return PhaseConfig{std::move(omega)};
}

PhaseConfig PhaseConfig::unchecked(Eigen::VectorXcd omega) { return PhaseConfig{std::move(omega)}; }

Eigen::VectorXd PhaseConfig::angles() const {
    Eigen::VectorXd theta(omega.size());
    for (Eigen::Index i = 0; i < omega.size(); ++i) theta[i] = std::arg(omega[i]);
    return theta;
}

Eigen::MatrixXcd propagation_matrix(const PointSet& dst, const PointSet& src) {
    const double amp = 1.0 / std::sqrt(4.0 * M_PI);
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(dst.size()), static_cast<Eigen::Index>(src.size()));
    for (std::size_t j = 0; j < src.size(); ++j) {
        for (std::size_t i = 0; i < dst.size(); ++i) {
            const double d = (dst[i] - src[j]).norm();
            if (d <= 0.0) {
                throw std::invalid_argument("propagation_matrix: coincident points (dst " +
                                            std::to_string(i) + ", src " + std::to_string(j) + ")");
            }
            const double phase = -2.0 * M_PI * d;
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                (amp / d) * std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    return out;
}

ChannelContext make_channel_context(const SceneConfig& scene) {
    scene.validate();
    const PointSet tx = element_positions(scene, ArraySel::Tx);
    const PointSet rx = element_positions(scene, ArraySel::Rx);
    const PointSet ris = element_positions(scene, ArraySel::Ris);
    const PointSet roi = element_positions(scene, ArraySel::Roi);
    const PointSet ue = element_positions(scene, ArraySel::Ue);

    ChannelContext ctx;
    ctx.scene = scene;
    ctx.ue_to_tx = propagation_matrix(tx, ue).col(0);
    ctx.ue_to_ris = propagation_matrix(ris, ue).col(0);
    ctx.ue_to_roi = propagation_matrix(roi, ue).col(0);
    ctx.ris_to_tx = propagation_matrix(tx, ris);
    ctx.roi_to_tx = propagation_matrix(tx, roi);
    ctx.tx_to_ris = propagation_matrix(ris, tx);
    ctx.tx_to_roi = propagation_matrix(roi, tx);
    ctx.ris_to_roi = propagation_matrix(roi, ris);
    ctx.roi_to_ris = propagation_matrix(ris, roi);
    ctx.ris_to_rx = propagation_matrix(rx, ris);
    ctx.roi_to_rx = propagation_matrix(rx, roi);
    return ctx;
}

namespace {

void check_dims(const ChannelContext& ctx, const TargetImage& sigma, const PhaseConfig& omega) {
    if (sigma.sigma.size() != ctx.scene.n_image()) {
        throw std::invalid_argument("channel: sigma has wrong length");
    }
    if (omega.omega.size() != ctx.scene.n_ris()) {
        throw std::invalid_argument("channel: omega has wrong length");
    }
}

} // namespace

Eigen::VectorXcd comm_channel(const ChannelContext& ctx, const TargetImage& sigma,
                              const PhaseConfig& omega) {
    check_dims(ctx, sigma, omega);
    const auto& w = omega.omega;
    const Eigen::VectorXcd s = sigma.sigma.cast<std::complex<double>>();

    // los + single bounce over RIS + single bounce over target
    Eigen::VectorXcd h = ctx.ue_to_tx;
    h += ctx.ris_to_tx * w.cwiseProduct(ctx.ue_to_ris);
    h += ctx.roi_to_tx * s.cwiseProduct(ctx.ue_to_roi);
    // double bounce UE -> RIS -> target -> TX and UE -> target -> RIS -> TX
    h += ctx.roi_to_tx * s.cwiseProduct(ctx.ris_to_roi * w.cwiseProduct(ctx.ue_to_ris));
    h += ctx.ris_to_tx * w.cwiseProduct(ctx.roi_to_ris * s.cwiseProduct(ctx.ue_to_roi));
    return h;
}

Eigen::MatrixXcd sensing_channel(const ChannelContext& ctx, const TargetImage& sigma,
                                 const PhaseConfig& omega) {
    check_dims(ctx, sigma, omega);
    const auto& w = omega.omega;
    const Eigen::VectorXcd s = sigma.sigma.cast<std::complex<double>>();

    Eigen::MatrixXcd h = ctx.ris_to_rx * w.asDiagonal() * ctx.tx_to_ris;
    h += ctx.roi_to_rx * s.asDiagonal() * ctx.tx_to_roi;
    h += ctx.roi_to_rx * s.asDiagonal() * ctx.ris_to_roi * w.asDiagonal() * ctx.tx_to_ris;
    h += ctx.ris_to_rx * w.asDiagonal() * ctx.roi_to_ris * s.asDiagonal() * ctx.tx_to_roi;
    return h;
}

Eigen::VectorXcd f_phy(const ChannelContext& ctx, const TargetImage& sigma,
                       const PhaseConfig& omega) {
    const Eigen::MatrixXcd h = sensing_channel(ctx, sigma, omega);
    return Eigen::Map<const Eigen::VectorXcd>(h.data(), h.size());
}

Eigen::VectorXcd comm_channel(const SceneConfig& scene, const TargetImage& sigma,
                              const PhaseConfig& omega) {
    return comm_channel(make_channel_context(scene), sigma, omega);
}

Eigen::MatrixXcd sensing_channel(const SceneConfig& scene, const TargetImage& sigma,
                                 const PhaseConfig& omega) {
    return sensing_channel(make_channel_context(scene), sigma, omega);
}

Eigen::VectorXcd f_phy(const SceneConfig& scene, const TargetImage& sigma,
                       const PhaseConfig& omega) {
    return f_phy(make_channel_context(scene), sigma, omega);
}

Eigen::MatrixXcd ls_estimate(const Eigen::MatrixXcd& received, const Eigen::MatrixXcd& pilots,
                             double tx_power_w) {
    if (pilots.rows() != pilots.cols() || received.cols() != pilots.rows()) {
        throw std::invalid_argument("ls_estimate: dimension mismatch");
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(pilots);
    if (!lu.isInvertible()) {
        throw std::invalid_argument("ls_estimate: pilot matrix is singular");
    }
    return (1.0 / std::sqrt(tx_power_w)) * received * lu.inverse();
}

Eigen::MatrixXcd dft_pilots(int n) {
    Eigen::MatrixXcd f(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const double phase = -2.0 * M_PI * static_cast<double>(r) * static_cast<double>(c) /
                                 static_cast<double>(n);
            f(r, c) = std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    return f / std::sqrt(static_cast<double>(n));
}

Measurement simulate_measurement(const ChannelContext& ctx, const TargetImage& sigma,
                                 const PhaseConfig& omega, std::uint64_t rng_seed) {
    Eigen::VectorXcd h = f_phy(ctx, sigma, omega);
    const double noise_w = ctx.scene.measurement_noise_w();
    if (noise_w > 0.0) {
        Rng rng(rng_seed);
        for (Eigen::Index i = 0; i < h.size(); ++i) {
            h[i] += rng.next_cnormal(noise_w);
        }
    }
    return Measurement{std::move(h), omega};
}

Measurement simulate_measurement(const SceneConfig& scene, const TargetImage& sigma,
                                 const PhaseConfig& omega, std::uint64_t rng_seed) {
    return simulate_measurement(make_channel_context(scene), sigma, omega, rng_seed);
}

SensingOperator make_sensing_operator(const ChannelContext& ctx, const TargetImage& sigma) {
    if (sigma.sigma.size() != ctx.scene.n_image()) {
        throw std::invalid_argument("sensing operator: sigma has wrong length");
    }
    const Eigen::VectorXcd s = sigma.sigma.cast<std::complex<double>>();
    const int n_r = ctx.scene.n_rx;
    const int n_t = ctx.scene.n_tx;
    const int n_s = ctx.scene.n_ris();

    // Gather the RIS-facing factors: H_sen(omega) = R diag(omega) P
    //                                             + Q diag(omega) T + C
    const Eigen::MatrixXcd p = ctx.tx_to_ris + ctx.roi_to_ris * s.asDiagonal() * ctx.tx_to_roi;
    const Eigen::MatrixXcd q = ctx.roi_to_rx * s.asDiagonal() * ctx.ris_to_roi;
    const Eigen::MatrixXcd& r = ctx.ris_to_rx;
    const Eigen::MatrixXcd& t = ctx.tx_to_ris;
    const Eigen::MatrixXcd c = ctx.roi_to_rx * s.asDiagonal() * ctx.tx_to_roi;

    SensingOperator op;
    op.ris_part.resize(static_cast<Eigen::Index>(n_r) * n_t, n_s);
    for (int n = 0; n < n_s; ++n) {
        for (int tcol = 0; tcol < n_t; ++tcol) {
            for (int rrow = 0; rrow < n_r; ++rrow) {
                // column-major vec index of entry (rrow, tcol)
                op.ris_part(static_cast<Eigen::Index>(tcol) * n_r + rrow, n) =
                    r(rrow, n) * p(n, tcol) + q(rrow, n) * t(n, tcol);
            }
        }
    }
    op.direct_part = Eigen::Map<const Eigen::VectorXcd>(c.data(), c.size());
    return op;
}

SensingOperator make_no_ris_operator(const ChannelContext& ctx, const TargetImage& sigma) {
    if (sigma.sigma.size() != ctx.scene.n_image()) {
        throw std::invalid_argument("sensing operator: sigma has wrong length");
    }
    const Eigen::VectorXcd s = sigma.sigma.cast<std::complex<double>>();
    const Eigen::MatrixXcd c = ctx.roi_to_rx * s.asDiagonal() * ctx.tx_to_roi;
    SensingOperator op;
    op.ris_part = Eigen::MatrixXcd::Zero(c.size(), ctx.scene.n_ris());
    op.direct_part = Eigen::Map<const Eigen::VectorXcd>(c.data(), c.size());
    return op;
}

Eigen::MatrixXd stacked_real_matrix(const Eigen::MatrixXcd& m) {
    Eigen::MatrixXd out(2 * m.rows(), 2 * m.cols());
    out.topLeftCorner(m.rows(), m.cols()) = m.real();
    out.topRightCorner(m.rows(), m.cols()) = -m.imag();
    out.bottomLeftCorner(m.rows(), m.cols()) = m.imag();
    out.bottomRightCorner(m.rows(), m.cols()) = m.real();
    return out;
}

Eigen::VectorXd stacked_real_vector(const Eigen::VectorXcd& v) {
    Eigen::VectorXd out(2 * v.size());
    out.head(v.size()) = v.real();
    out.tail(v.size()) = v.imag();
    return out;
}

void write_complex_csv(std::ostream& out, const Eigen::MatrixXcd& m) {
    out.precision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out << ',';
            out << m(r, c).real() << ',' << m(r, c).imag();
        }
        out << '\n';
    }
}

} // namespace risrec
