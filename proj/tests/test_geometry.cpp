// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <limits>

#include "risrec/geometry.hpp"

using namespace risrec;

TEST_CASE("default scene TX ULA is centered with half-wavelength pitch") {
    SceneConfig scene;
    const PointSet tx = element_positions(scene, ArraySel::Tx);
    REQUIRE(tx.size() == 2);
    CHECK((tx[0] - Eigen::Vector3d(30, 49.75, 50)).norm() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK((tx[1] - Eigen::Vector3d(30, 50.25, 50)).norm() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(((tx[0] + tx[1]) / 2 - scene.tx_position).norm() < 1e-12);
}

TEST_CASE("single-element ULA is its own center") {
    SceneConfig scene;
    scene.n_tx = 1;
    const PointSet tx = element_positions(scene, ArraySel::Tx);
    REQUIRE(tx.size() == 1);
    CHECK((tx[0] - scene.tx_position).norm() == 0.0);
}

TEST_CASE("20x20 RIS at half-wavelength pitch spans 9.5 wavelengths") {
    SceneConfig scene; // default RIS is 20x20, pitch 0.5
    const PointSet ris = element_positions(scene, ArraySel::Ris);
    REQUIRE(ris.size() == 400);
    double min_y = 1e9, max_y = -1e9, min_z = 1e9, max_z = -1e9;
    for (const auto& p : ris) {
        CHECK(p.x() == 0.0);
        min_y = std::min(min_y, p.y());
        max_y = std::max(max_y, p.y());
        min_z = std::min(min_z, p.z());
        max_z = std::max(max_z, p.z());
    }
    CHECK(max_y - min_y == doctest::Approx(9.5).epsilon(1e-12));
    CHECK(max_z - min_z == doctest::Approx(9.5).epsilon(1e-12));
    // row-major: consecutive elements in a row step along +y
    CHECK(ris[1].y() - ris[0].y() == doctest::Approx(0.5));
    CHECK(ris[1].z() == ris[0].z());
}

TEST_CASE("planar grid nearest-neighbor distance equals the pitch") {
    SceneConfig scene;
    scene.roi_side_voxels = 5;
    scene.voxel_pitch = 0.7;
    const PointSet roi = element_positions(scene, ArraySel::Roi);
    for (std::size_t i = 0; i < roi.size(); ++i) {
        double nearest = 1e9;
        for (std::size_t j = 0; j < roi.size(); ++j) {
            if (i != j) nearest = std::min(nearest, (roi[i] - roi[j]).norm());
        }
        CHECK(nearest == doctest::Approx(0.7).epsilon(1e-12));
    }
}

TEST_CASE("element_positions is pure") {
    SceneConfig scene;
    const PointSet a = element_positions(scene, ArraySel::Roi);
    const PointSet b = element_positions(scene, ArraySel::Roi);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).norm() == 0.0);
}

TEST_CASE("power conversions round-trip") {
    CHECK(dbm_to_watts(-80.0) == doctest::Approx(1e-11).epsilon(1e-12));
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double p : {-120.0, -80.0, -10.0, 0.0, 23.0}) {
        CHECK(std::abs(watts_to_dbm(dbm_to_watts(p)) - p) < 1e-9);
    }
    CHECK(dbm_to_watts(-std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("scene validation rejects bad configs") {
    SceneConfig scene;
    scene.n_tx = 0;
    CHECK_THROWS_AS(scene.validate(), std::invalid_argument);
    scene = SceneConfig{};
    scene.tx_axis = {0, 2, 0};
    CHECK_THROWS_AS(scene.validate(), std::invalid_argument);
    scene = SceneConfig{};
    scene.element_pitch = 0.0;
    CHECK_THROWS_AS(scene.validate(), std::invalid_argument);
}

TEST_CASE("scene file parsing with defaults and overrides") {
    const std::string text = "# comment\n"
                             "ris_rows = 4\n"
                             "ris_cols = 5\n"
                             "tx_position = 10, 20, 30\n"
                             "rx_noise_dbm = -inf\n"
                             "sensing_noise_mode = ls_scaled\n";
    const SceneConfig scene = parse_scene(text);
    CHECK(scene.ris_rows == 4);
    CHECK(scene.ris_cols == 5);
    CHECK(scene.n_ris() == 20);
    CHECK(scene.tx_position.x() == 10.0);
    CHECK(scene.rx_noise_w() == 0.0);
    CHECK(scene.sensing_noise == SensingNoiseModel::LsScaled);
    // untouched keys keep defaults
    CHECK(scene.ue_position.y() == -50.0);

    CHECK_THROWS(parse_scene("nonsense_key = 1\n"));
    CHECK_THROWS(parse_scene("ris_rows\n"));
}

TEST_CASE("measurement noise model scaling") {
    SceneConfig scene;
    scene.rx_noise_dbm = -80.0;
    scene.tx_power_dbm = 0.0;
    scene.sensing_noise = SensingNoiseModel::Aggregate;
    CHECK(scene.measurement_noise_w() == doctest::Approx(1e-11).epsilon(1e-12));
    scene.sensing_noise = SensingNoiseModel::LsScaled;
    CHECK(scene.measurement_noise_w() == doctest::Approx(1e-8).epsilon(1e-12));
}

TEST_CASE("unknown selector is rejected") {
    SceneConfig scene;
    CHECK_THROWS_AS(element_positions(scene, static_cast<ArraySel>(99)), std::invalid_argument);
}
