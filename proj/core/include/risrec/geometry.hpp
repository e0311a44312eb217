// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace risrec {

// How measurement noise is derived from the configured powers:
//  - Aggregate: the configured RX noise power is the total disturbance on the
//    estimated sensing channel, applied as-is.
//  - LsScaled: the configured RX noise power is thermal noise at the RX front
//    end; the disturbance on the channel estimate is that power divided by the
//    transmit power, which is what least-squares estimation over unit-power
//    pilots leaves behind.
enum class SensingNoiseModel { Aggregate, LsScaled };

enum class ArraySel { Tx, Rx, Ris, Roi, Ue };

// Full description of the static 3D scene. All lengths are in wavelengths
// (the wavelength is 1 internally), powers in dBm.
struct SceneConfig {
    double wavelength = 1.0;

    Eigen::Vector3d tx_position{30.0, 50.0, 50.0};
    Eigen::Vector3d tx_axis{0.0, 1.0, 0.0};
    int n_tx = 2;

    Eigen::Vector3d rx_position{30.0, 52.0, 50.0};
    Eigen::Vector3d rx_axis{0.0, 1.0, 0.0};
    int n_rx = 2;

    Eigen::Vector3d ris_origin{0.0, 0.0, 0.0};
    int ris_rows = 20; // vertical (z) count
    int ris_cols = 20; // horizontal (y) count
    double element_pitch = 0.5;

    Eigen::Vector3d roi_center{50.0, 0.0, 0.0};
    int roi_side_voxels = 30; // grid is n x n
    double voxel_pitch = 1.0;

    Eigen::Vector3d ue_position{30.0, -50.0, 0.0};

    double tx_power_dbm = -10.0;
    double ue_noise_dbm = -80.0;
    double rx_noise_dbm = -80.0;
    SensingNoiseModel sensing_noise = SensingNoiseModel::Aggregate;

    int n_ris() const { return ris_rows * ris_cols; }
    int n_image() const { return roi_side_voxels * roi_side_voxels; }
    int n_meas() const { return n_tx * n_rx; }

    // Upper bound of the scattering-coefficient range: 4*pi*S^2/lambda^2 with
    // S the voxel area. For 1-wavelength voxels this is 4*pi.
    double sigma_max() const;

    double tx_power_w() const;
    double ue_noise_w() const;
    double rx_noise_w() const;

    // Total variance of the complex disturbance on each entry of the
    // estimated sensing channel, per the configured noise model.
    double measurement_noise_w() const;

    // Throws std::invalid_argument when an invariant is violated
    // (counts >= 1, positive pitches, unit axes).
    void validate() const;
};

using PointSet = std::vector<Eigen::Vector3d>;

// Exact 3D element centers of the selected array or grid.
//
// ULAs (TX, RX) are centered on the declared position along the declared axis
// with half-wavelength pitch. Planar grids (RIS, ROI) lie in the y-z plane at
// the x of their center, row-major with rows scanning top-down in z and
// columns left-right in y.
PointSet element_positions(const SceneConfig& config, ArraySel which);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Reads a scene from a flat key=value file ('#' comments, 3-vectors as
// comma-separated triples). Keys match the SceneConfig field names; missing
// keys keep their defaults. Unknown keys raise std::runtime_error.
SceneConfig load_scene_file(const std::string& path);

// Same parser on an in-memory string (used by tests and the CLI).
SceneConfig parse_scene(const std::string& text);

std::string to_string(SensingNoiseModel model);
SensingNoiseModel sensing_noise_model_from_string(const std::string& name);

} // namespace risrec
