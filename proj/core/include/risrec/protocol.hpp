// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <vector>

#include "risrec/channel.hpp"

namespace risrec {

// Time-division frame accounting: one frame holds 140 * 2^mu OFDM symbols of
// which the last n_tx carry the sensing phase configuration.
struct ProtocolConfig {
    int mu = 1;
    int n_symbols = 280;      // always 140 * 2^mu
    int sensing_symbols = 2;  // per frame
    int frames_per_decision = 4;

    static ProtocolConfig make(int mu, int sensing_symbols, int frames_per_decision);
    void validate() const;
};

struct SeReport {
    double se_com = 0.0;  // bits/s/Hz under the communication-optimal phases
    double se_sen = 0.0;  // bits/s/Hz under the sensing phases (mean over the set)
    double se_avg = 0.0;  // frame-averaged
    double se_loss_fraction = 0.0; // (se_com - se_avg) / se_com
};

// log2(1 + P_t * ||h_com(omega)||^2 / sigma_com^2), powers in linear watts.
double spectral_efficiency(const ChannelContext& ctx, const TargetImage& sigma,
                           const PhaseConfig& omega);

// Frame-averaged spectral efficiency: communication symbols carry se_com,
// the trailing sensing symbols carry se_sen.
SeReport average_se(double se_com, double se_sen, const ProtocolConfig& protocol);

// Affine decomposition of the downlink channel in the phase vector:
// h_com(omega) = h_b * omega + h_a.
struct CommObjective {
    Eigen::MatrixXcd h_b; // n_tx x n_ris
    Eigen::VectorXcd h_a; // n_tx
};
CommObjective build_comm_objective(const ChannelContext& ctx, const TargetImage& sigma);

double comm_objective_value(const CommObjective& obj, const Eigen::VectorXcd& omega);

// Block-coordinate ascent on ||h_b * omega + h_a||^2 over unit-modulus
// entries, starting from all-ones. Each element update has the closed form
// aligning its column with the residual, so the objective never decreases.
struct BcdResult {
    PhaseConfig omega;
    std::vector<double> objective_trace; // value after every full sweep
    bool converged = false;
};
BcdResult optimize_comm_phase(const ChannelContext& ctx, const TargetImage& sigma, double tol,
                              int max_iters);
BcdResult optimize_comm_phase(const CommObjective& obj, double tol, int max_iters);

// One spectral-efficiency table row for a scene: the communication-optimal
// phases against the mean over the provided sensing phases. Throws on an
// empty phase list.
SeReport se_report(const ChannelContext& ctx, const TargetImage& sigma,
                   const std::vector<PhaseConfig>& omega_sen, const ProtocolConfig& protocol,
                   double bcd_tol = 1e-9, int bcd_max_iters = 200);

struct SeTableRow {
    int ris_rows = 0;
    int ris_cols = 0;
    SeReport report;
};

// CSV with header (ris_size, se_com, se_sen, se_avg, se_loss_percent).
std::string se_table_csv(const std::vector<SeTableRow>& rows);

} // namespace risrec
