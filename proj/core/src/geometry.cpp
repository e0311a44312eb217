// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "risrec/geometry.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace risrec {

double dbm_to_watts(double dbm) {
    if (std::isinf(dbm) && dbm < 0) return 0.0;
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watts_to_dbm(double watts) {
    if (watts <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(watts) + 30.0;
}

double SceneConfig::sigma_max() const {
    const double s = voxel_pitch * voxel_pitch; // voxel area in lambda^2
    return 4.0 * M_PI * s * s;                  // lambda = 1 internally
}

double SceneConfig::tx_power_w() const { return dbm_to_watts(tx_power_dbm); }
double SceneConfig::ue_noise_w() const { return dbm_to_watts(ue_noise_dbm); }
double SceneConfig::rx_noise_w() const { return dbm_to_watts(rx_noise_dbm); }

double SceneConfig::measurement_noise_w() const {
    switch (sensing_noise) {
        case SensingNoiseModel::Aggregate:
            return rx_noise_w();
        case SensingNoiseModel::LsScaled:
            return rx_noise_w() / tx_power_w();
    }
    return rx_noise_w();
}

namespace {

void check_unit_axis(const Eigen::Vector3d& axis, const char* name) {
    if (std::abs(axis.norm() - 1.0) > 1e-12) {
        throw std::invalid_argument(std::string("scene: ") + name + " must have unit norm");
    }
}

} // namespace

void SceneConfig::validate() const {
    if (n_tx < 1) throw std::invalid_argument("scene: n_tx must be >= 1");
    if (n_rx < 1) throw std::invalid_argument("scene: n_rx must be >= 1");
    if (ris_rows < 1 || ris_cols < 1) throw std::invalid_argument("scene: RIS grid must be >= 1x1");
    if (roi_side_voxels < 1) throw std::invalid_argument("scene: ROI grid must be >= 1x1");
    if (element_pitch <= 0.0) throw std::invalid_argument("scene: element_pitch must be > 0");
    if (voxel_pitch <= 0.0) throw std::invalid_argument("scene: voxel_pitch must be > 0");
    if (wavelength <= 0.0) throw std::invalid_argument("scene: wavelength must be > 0");
    check_unit_axis(tx_axis, "tx_axis");
    check_unit_axis(rx_axis, "rx_axis");
}

namespace {

PointSet ula_positions(const Eigen::Vector3d& center, const Eigen::Vector3d& axis, int count) {
    // Half-wavelength pitch, center-symmetric about the declared position.
    PointSet points;
    points.reserve(static_cast<std::size_t>(count));
    const double half = 0.5 * static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) {
        points.push_back(center + (static_cast<double>(i) - half) * 0.5 * axis);
    }
    return points;
}

PointSet grid_positions(const Eigen::Vector3d& center, int rows, int cols, double pitch) {
    // y-z plane, row-major; rows scan top-down in z, columns left-right in y.
    PointSet points;
    points.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    const double row_half = 0.5 * static_cast<double>(rows - 1);
    const double col_half = 0.5 * static_cast<double>(cols - 1);
    for (int r = 0; r < rows; ++r) {
        const double z = (row_half - static_cast<double>(r)) * pitch;
        for (int c = 0; c < cols; ++c) {
            const double y = (static_cast<double>(c) - col_half) * pitch;
            points.push_back(center + Eigen::Vector3d(0.0, y, z));
        }
    }
    return points;
}

} // namespace

PointSet element_positions(const SceneConfig& config, ArraySel which) {
    config.validate();
    switch (which) {
        case ArraySel::Tx:
            return ula_positions(config.tx_position, config.tx_axis, config.n_tx);
        case ArraySel::Rx:
            return ula_positions(config.rx_position, config.rx_axis, config.n_rx);
        case ArraySel::Ris:
            return grid_positions(config.ris_origin, config.ris_rows, config.ris_cols,
                                  config.element_pitch);
        case ArraySel::Roi:
            return grid_positions(config.roi_center, config.roi_side_voxels,
                                  config.roi_side_voxels, config.voxel_pitch);
        case ArraySel::Ue:
            return {config.ue_position};
    }
    throw std::invalid_argument("element_positions: unknown array selector");
}

std::string to_string(SensingNoiseModel model) {
    return model == SensingNoiseModel::Aggregate ? "aggregate" : "ls_scaled";
}

SensingNoiseModel sensing_noise_model_from_string(const std::string& name) {
    if (name == "aggregate") return SensingNoiseModel::Aggregate;
    if (name == "ls_scaled") return SensingNoiseModel::LsScaled;
    throw std::runtime_error("scene: unknown sensing_noise_mode '" + name + "'");
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& key) {
    const std::string v = trim(value);
    if (v == "-inf" || v == "-Inf" || v == "-INF") {
        return -std::numeric_limits<double>::infinity();
    }
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("scene: cannot parse value for key '" + key + "'");
    }
    if (pos != v.size()) {
        throw std::runtime_error("scene: trailing characters in value for key '" + key + "'");
    }
    return out;
}

Eigen::Vector3d parse_vec3(const std::string& value, const std::string& key) {
    std::string v = value;
    for (char& c : v) {
        if (c == ',') c = ' ';
    }
    std::istringstream iss(v);
    Eigen::Vector3d out;
    if (!(iss >> out.x() >> out.y() >> out.z())) {
        throw std::runtime_error("scene: key '" + key + "' needs three numbers");
    }
    std::string rest;
    if (iss >> rest) {
        throw std::runtime_error("scene: key '" + key + "' has extra fields");
    }
    return out;
}

int parse_int(const std::string& value, const std::string& key) {
    const double d = parse_double(value, key);
    const int i = static_cast<int>(std::llround(d));
    if (std::abs(d - static_cast<double>(i)) > 1e-9) {
        throw std::runtime_error("scene: key '" + key + "' must be an integer");
    }
    return i;
}

} // namespace

SceneConfig parse_scene(const std::string& text) {
    SceneConfig scene;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("scene: line " + std::to_string(line_no) +
                                     " is not of the form key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "wavelength") scene.wavelength = parse_double(value, key);
        else if (key == "tx_position") scene.tx_position = parse_vec3(value, key);
        else if (key == "tx_axis") scene.tx_axis = parse_vec3(value, key);
        else if (key == "n_tx") scene.n_tx = parse_int(value, key);
        else if (key == "rx_position") scene.rx_position = parse_vec3(value, key);
        else if (key == "rx_axis") scene.rx_axis = parse_vec3(value, key);
        else if (key == "n_rx") scene.n_rx = parse_int(value, key);
        else if (key == "ris_origin") scene.ris_origin = parse_vec3(value, key);
        else if (key == "ris_rows") scene.ris_rows = parse_int(value, key);
        else if (key == "ris_cols") scene.ris_cols = parse_int(value, key);
        else if (key == "element_pitch") scene.element_pitch = parse_double(value, key);
        else if (key == "roi_center") scene.roi_center = parse_vec3(value, key);
        else if (key == "roi_side_voxels") scene.roi_side_voxels = parse_int(value, key);
        else if (key == "voxel_pitch") scene.voxel_pitch = parse_double(value, key);
        else if (key == "ue_position") scene.ue_position = parse_vec3(value, key);
        else if (key == "tx_power_dbm") scene.tx_power_dbm = parse_double(value, key);
        else if (key == "ue_noise_dbm") scene.ue_noise_dbm = parse_double(value, key);
        else if (key == "rx_noise_dbm") scene.rx_noise_dbm = parse_double(value, key);
        else if (key == "sensing_noise_mode") scene.sensing_noise = sensing_noise_model_from_string(value);
        else throw std::runtime_error("scene: unknown key '" + key + "'");
    }
    scene.validate();
    return scene;
}

SceneConfig load_scene_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw std::runtime_error("scene: cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_scene(buffer.str());
}

} // namespace risrec
