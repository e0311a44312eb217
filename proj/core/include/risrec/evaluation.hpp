// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <vector>

#include "risrec/recognizer.hpp"

namespace risrec {

struct EvalReport {
    double eta = 0.0;          // correct prediction rate
    Eigen::MatrixXi confusion; // rows true class, columns predicted
    int total = 0;
    double wall_seconds = 0.0;
    std::string config_echo;
};

// argmax ties break toward the lowest class index.
int argmax_class(const Eigen::VectorXd& probabilities);

EvalReport prediction_rate(const std::vector<Eigen::VectorXd>& predictions,
                           const std::vector<int>& labels);

// K x K matrix of |w_k1^H w_k2| / (||w_k1|| * ||w_k2||); symmetric with unit
// diagonal.
Eigen::MatrixXd phase_correlation(const std::vector<PhaseConfig>& omegas);

// Elementwise mean of the per-trace correlation matrices.
Eigen::MatrixXd averaged_correlation(const std::vector<EpisodeTrace>& traces);

// Mean of the off-diagonal entries of the lower-right block starting at
// step `first_step` (0-based); the adaptivity statistic reported for trained
// models.
double mean_offdiag_from(const Eigen::MatrixXd& corr, int first_step);

// Plain numeric matrix (space-separated) and CSV renderings.
std::string matrix_to_text(const Eigen::MatrixXd& m);
std::string matrix_to_csv(const Eigen::MatrixXd& m);

} // namespace risrec
