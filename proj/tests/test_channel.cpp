// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "risrec/channel.hpp"

using namespace risrec;
namespace rt = risrec::testing;

TEST_CASE("propagation matrix single pairs") {
    // one-wavelength separation: phase wraps to 1
    const Eigen::MatrixXcd one = propagation_matrix({{1, 0, 0}}, {{0, 0, 0}});
    CHECK(one(0, 0).real() == doctest::Approx(1.0 / std::sqrt(4.0 * M_PI)).epsilon(1e-12));
    CHECK(std::abs(one(0, 0).imag()) < 1e-12);

    // half-wavelength separation: sign flip
    const Eigen::MatrixXcd half = propagation_matrix({{0.5, 0, 0}}, {{0, 0, 0}});
    CHECK(half(0, 0).real() == doctest::Approx(-2.0 / std::sqrt(4.0 * M_PI)).epsilon(1e-12));
    CHECK(std::abs(half(0, 0).imag()) < 1e-10);
}

TEST_CASE("propagation matrix magnitude law and coincident-point error") {
    const PointSet dst = {{3, 1, 0}, {5, -2, 1}};
    const PointSet src = {{0, 0, 0}, {1, 1, 1}};
    const Eigen::MatrixXcd g = propagation_matrix(dst, src);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double d = (dst[static_cast<std::size_t>(i)] - src[static_cast<std::size_t>(j)]).norm();
            CHECK(std::abs(g(i, j)) == doctest::Approx(1.0 / (std::sqrt(4.0 * M_PI) * d)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_WITH_AS(propagation_matrix({{1, 1, 1}}, {{1, 1, 1}}),
                         doctest::Contains("coincident"), std::invalid_argument);
}

TEST_CASE("TX-UE vector matches the per-pair oracle on the default scene") {
    SceneConfig scene;
    const ChannelContext ctx = make_channel_context(scene);
    const PointSet tx = element_positions(scene, ArraySel::Tx);
    for (int t = 0; t < scene.n_tx; ++t) {
        CHECK(rt::rel_error(ctx.ue_to_tx[t], rt::green(tx[static_cast<std::size_t>(t)],
                                                       scene.ue_position)) < 1e-12);
    }
}

TEST_CASE("comm channel with zero target keeps only LOS and RIS terms") {
    SceneConfig scene;
    scene.ris_rows = scene.ris_cols = 2;
    scene.roi_side_voxels = 2;
    const ChannelContext ctx = make_channel_context(scene);
    const TargetImage zero{Eigen::VectorXd::Zero(scene.n_image())};
    const PhaseConfig omega = rt::random_phase(scene.n_ris(), 7);

    const Eigen::VectorXcd h = comm_channel(ctx, zero, omega);
    const Eigen::VectorXcd expected =
        ctx.ue_to_tx + ctx.ris_to_tx * omega.omega.cwiseProduct(ctx.ue_to_ris);
    CHECK(rt::max_rel_error(h, expected) < 1e-14);

    // degenerate check: zero-amplitude phases leave the line of sight only
    const PhaseConfig dark = PhaseConfig::unchecked(Eigen::VectorXcd::Zero(scene.n_ris()));
    CHECK(rt::max_rel_error(comm_channel(ctx, zero, dark), ctx.ue_to_tx) < 1e-14);
}

TEST_CASE("composed channels match the brute-force path oracle") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const SceneConfig scene = rt::random_small_scene(seed);
        const ChannelContext ctx = make_channel_context(scene);
        const Eigen::VectorXd sig = rt::random_sigma(scene.n_image(), 2.0, seed * 31 + 1);
        const PhaseConfig omega = rt::random_phase(scene.n_ris(), seed * 31 + 2);
        const TargetImage image{sig};

        CHECK(rt::max_rel_error(comm_channel(ctx, image, omega),
                                rt::oracle_comm_channel(scene, sig, omega.omega)) < 1e-12);
        CHECK(rt::max_rel_error(sensing_channel(ctx, image, omega),
                                rt::oracle_sensing_channel(scene, sig, omega.omega)) < 1e-12);
    }
}

TEST_CASE("sensing channel drops sigma-bearing terms for a zero target") {
    SceneConfig scene = rt::random_small_scene(3);
    const ChannelContext ctx = make_channel_context(scene);
    const TargetImage zero{Eigen::VectorXd::Zero(scene.n_image())};
    const PhaseConfig omega = rt::random_phase(scene.n_ris(), 11);
    const Eigen::MatrixXcd expected =
        ctx.ris_to_rx * omega.omega.asDiagonal() * ctx.tx_to_ris;
    CHECK(rt::max_rel_error(sensing_channel(ctx, zero, omega), expected) < 1e-14);
}

TEST_CASE("f_phy is the column-major vectorization of the sensing channel") {
    const SceneConfig scene = rt::random_small_scene(5);
    const ChannelContext ctx = make_channel_context(scene);
    const TargetImage image{rt::random_sigma(scene.n_image(), 1.5, 55)};
    const PhaseConfig omega = rt::random_phase(scene.n_ris(), 56);

    const Eigen::MatrixXcd h = sensing_channel(ctx, image, omega);
    const Eigen::VectorXcd v = f_phy(ctx, image, omega);
    REQUIRE(v.size() == h.size());
    for (int t = 0; t < scene.n_tx; ++t) {
        for (int r = 0; r < scene.n_rx; ++r) {
            CHECK(v[t * scene.n_rx + r] == h(r, t));
        }
    }
}

TEST_CASE("f_phy linear in sigma, affine in omega") {
    const SceneConfig scene = rt::random_small_scene(9);
    const ChannelContext ctx = make_channel_context(scene);
    const Eigen::VectorXd s1 = rt::random_sigma(scene.n_image(), 1.0, 90);
    const Eigen::VectorXd s2 = rt::random_sigma(scene.n_image(), 1.0, 91);
    const PhaseConfig omega = rt::random_phase(scene.n_ris(), 92);

    const double a = 0.7, b = 1.9;
    const Eigen::VectorXcd lhs = f_phy(ctx, TargetImage{a * s1 + b * s2}, omega);
    const Eigen::VectorXcd rhs =
        a * f_phy(ctx, TargetImage{s1}, omega) + b * f_phy(ctx, TargetImage{s2}, omega);
    CHECK((lhs - rhs).norm() / rhs.norm() < 1e-10);

    // affinity: f(sigma, w) - f(sigma, 0) is linear in w
    const TargetImage image{s1};
    const Eigen::VectorXcd w1 = rt::random_phase(scene.n_ris(), 93).omega;
    const Eigen::VectorXcd w2 = rt::random_phase(scene.n_ris(), 94).omega;
    const PhaseConfig dark = PhaseConfig::unchecked(Eigen::VectorXcd::Zero(scene.n_ris()));
    const Eigen::VectorXcd base = f_phy(ctx, image, dark);
    const Eigen::VectorXcd lin_sum =
        f_phy(ctx, image, PhaseConfig::unchecked(w1 + w2)) - base;
    const Eigen::VectorXcd sum_lin = (f_phy(ctx, image, PhaseConfig::unchecked(w1)) - base) +
                                     (f_phy(ctx, image, PhaseConfig::unchecked(w2)) - base);
    CHECK((lin_sum - sum_lin).norm() / sum_lin.norm() < 1e-10);

    // doubling identity
    const Eigen::VectorXcd f1 = f_phy(ctx, TargetImage{s1}, omega);
    const Eigen::VectorXcd f2 = f_phy(ctx, TargetImage{2.0 * s1}, omega);
    const Eigen::VectorXcd f0 = f_phy(ctx, TargetImage{Eigen::VectorXd::Zero(scene.n_image())}, omega);
    CHECK(((f2 - f1) - (f1 - f0)).norm() / f1.norm() < 1e-10);
}

TEST_CASE("reciprocal propagation pair is a transpose") {
    const SceneConfig scene = rt::random_small_scene(13);
    const ChannelContext ctx = make_channel_context(scene);
    CHECK((ctx.ris_to_roi - ctx.roi_to_ris.transpose()).norm() == 0.0);
}

TEST_CASE("sensing operator reproduces f_phy") {
    const SceneConfig scene = rt::random_small_scene(17);
    const ChannelContext ctx = make_channel_context(scene);
    const TargetImage image{rt::random_sigma(scene.n_image(), 2.0, 170)};
    const SensingOperator op = make_sensing_operator(ctx, image);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const PhaseConfig omega = rt::random_phase(scene.n_ris(), 171 + seed);
        const Eigen::VectorXcd via_op = op.ris_part * omega.omega + op.direct_part;
        CHECK(rt::max_rel_error(via_op, f_phy(ctx, image, omega)) < 1e-12);
    }
    // no-RIS variant keeps only the direct term
    const SensingOperator bare = make_no_ris_operator(ctx, image);
    CHECK(bare.ris_part.norm() == 0.0);
    const Eigen::MatrixXcd direct =
        ctx.roi_to_rx * image.sigma.cast<std::complex<double>>().asDiagonal() * ctx.tx_to_roi;
    CHECK(rt::max_rel_error(bare.direct_part,
                            Eigen::Map<const Eigen::VectorXcd>(direct.data(), direct.size())) <
          1e-14);
}

TEST_CASE("LS estimation recovers the channel") {
    const int n_t = 2, n_r = 3;
    Rng rng(404);
    Eigen::MatrixXcd h(n_r, n_t);
    for (int c = 0; c < n_t; ++c) {
        for (int r = 0; r < n_r; ++r) h(r, c) = rng.next_cnormal(1.0);
    }
    const double p_t = 0.05;

    // identity pilots: noise-free LS is exact
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(n_t, n_t);
    const Eigen::MatrixXcd rx_id = std::sqrt(p_t) * h * identity;
    CHECK(rt::max_rel_error(ls_estimate(rx_id, identity, p_t), h) < 1e-14);

    // DFT pilots
    const Eigen::MatrixXcd f = dft_pilots(n_t);
    const Eigen::MatrixXcd rx_f = std::sqrt(p_t) * h * f;
    CHECK(rt::max_rel_error(ls_estimate(rx_f, f, p_t), h) < 1e-12);

    // zero received -> zero estimate
    CHECK(ls_estimate(Eigen::MatrixXcd::Zero(n_r, n_t), identity, p_t).norm() == 0.0);

    // singular pilots rejected
    Eigen::MatrixXcd singular = Eigen::MatrixXcd::Zero(n_t, n_t);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(ls_estimate(rx_id, singular, p_t), std::invalid_argument);
}

TEST_CASE("simulated measurement determinism and noise-free limit") {
    SceneConfig scene = rt::random_small_scene(21);
    scene.rx_noise_dbm = -80.0;
    const ChannelContext ctx = make_channel_context(scene);
    const TargetImage image{rt::random_sigma(scene.n_image(), 1.0, 210)};
    const PhaseConfig omega = rt::random_phase(scene.n_ris(), 211);

    const Measurement a = simulate_measurement(ctx, image, omega, 99);
    const Measurement b = simulate_measurement(ctx, image, omega, 99);
    CHECK((a.h_hat - b.h_hat).norm() == 0.0);
    const Measurement c = simulate_measurement(ctx, image, omega, 100);
    CHECK((a.h_hat - c.h_hat).norm() > 0.0);

    SceneConfig quiet = scene;
    quiet.rx_noise_dbm = -std::numeric_limits<double>::infinity();
    const ChannelContext qctx = make_channel_context(quiet);
    const Measurement clean = simulate_measurement(qctx, image, omega, 5);
    CHECK((clean.h_hat - f_phy(qctx, image, omega)).norm() == 0.0);
}

TEST_CASE("measurement noise variance matches the configured power") {
    SceneConfig scene = rt::random_small_scene(23);
    scene.rx_noise_dbm = -80.0; // 1e-11 W per entry
    scene.sensing_noise = SensingNoiseModel::Aggregate;
    const ChannelContext ctx = make_channel_context(scene);
    const TargetImage image{Eigen::VectorXd::Zero(scene.n_image())};
    const PhaseConfig omega = rt::random_phase(scene.n_ris(), 230);
    const Eigen::VectorXcd clean = f_phy(ctx, image, omega);

    const int draws = 100000;
    double acc = 0.0;
    long count = 0;
    for (int i = 0; i < draws; ++i) {
        const Measurement m = simulate_measurement(ctx, image, omega, 1000 + static_cast<std::uint64_t>(i));
        acc += (m.h_hat - clean).squaredNorm();
        count += m.h_hat.size();
    }
    const double variance = acc / static_cast<double>(count);
    CHECK(variance == doctest::Approx(1e-11).epsilon(0.02));
}

TEST_CASE("complex csv dump uses re,im cells") {
    Eigen::MatrixXcd m(1, 2);
    m(0, 0) = {1.5, -2.0};
    m(0, 1) = {0.0, 3.0};
    std::ostringstream out;
    write_complex_csv(out, m);
    CHECK(out.str() == "1.5,-2,0,3\n");
}
