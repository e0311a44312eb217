// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "risrec/protocol.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace risrec {

ProtocolConfig ProtocolConfig::make(int mu, int sensing_symbols, int frames_per_decision) {
    ProtocolConfig p;
    p.mu = mu;
    p.n_symbols = 140 * (1 << mu);
    p.sensing_symbols = sensing_symbols;
    p.frames_per_decision = frames_per_decision;
    p.validate();
    return p;
}

void ProtocolConfig::validate() const {
    if (mu < 0) throw std::invalid_argument("protocol: mu must be >= 0");
    if (n_symbols != 140 * (1 << mu)) {
        throw std::invalid_argument("protocol: n_symbols must equal 140 * 2^mu");
    }
    if (sensing_symbols < 0 || sensing_symbols > n_symbols) {
        throw std::invalid_argument("protocol: sensing_symbols out of range");
    }
    if (frames_per_decision < 1) {
        throw std::invalid_argument("protocol: frames_per_decision must be >= 1");
    }
}

double spectral_efficiency(const ChannelContext& ctx, const TargetImage& sigma,
                           const PhaseConfig& omega) {
    const Eigen::VectorXcd h = comm_channel(ctx, sigma, omega);
    const double snr = ctx.scene.tx_power_w() * h.squaredNorm() / ctx.scene.ue_noise_w();
    return std::log2(1.0 + snr);
}

SeReport average_se(double se_com, double se_sen, const ProtocolConfig& protocol) {
    protocol.validate();
    if (se_com < 0.0 || se_sen < 0.0) throw std::invalid_argument("average_se: SE must be >= 0");
    const double n0 = static_cast<double>(protocol.n_symbols);
    const double nt = static_cast<double>(protocol.sensing_symbols);
    SeReport r;
    r.se_com = se_com;
    r.se_sen = se_sen;
    r.se_avg = ((n0 - nt) / n0) * se_com + (nt / n0) * se_sen;
    r.se_loss_fraction = se_com > 0.0 ? (se_com - r.se_avg) / se_com : 0.0;
    return r;
}

CommObjective build_comm_objective(const ChannelContext& ctx, const TargetImage& sigma) {
    if (sigma.sigma.size() != ctx.scene.n_image()) {
        throw std::invalid_argument("comm objective: sigma has wrong length");
    }
    const Eigen::VectorXcd s = sigma.sigma.cast<std::complex<double>>();

    CommObjective obj;
    // static part: line of sight plus the target-only bounce
    obj.h_a = ctx.ue_to_tx + ctx.roi_to_tx * s.cwiseProduct(ctx.ue_to_roi);

    // phase-bearing part: diag(omega) * v == diag(v) * omega turns every
    // RIS-routed path into a matrix column scaled per element.
    const Eigen::VectorXcd into_ris =
        ctx.ue_to_ris + ctx.roi_to_ris * s.cwiseProduct(ctx.ue_to_roi);
    const Eigen::MatrixXcd via_target = ctx.roi_to_tx * s.asDiagonal() * ctx.ris_to_roi;
    obj.h_b = ctx.ris_to_tx * into_ris.asDiagonal();
    obj.h_b += via_target * ctx.ue_to_ris.asDiagonal();
    return obj;
}

double comm_objective_value(const CommObjective& obj, const Eigen::VectorXcd& omega) {
    return (obj.h_b * omega + obj.h_a).squaredNorm();
}

BcdResult optimize_comm_phase(const CommObjective& obj, double tol, int max_iters) {
    if (tol <= 0.0) throw std::invalid_argument("optimize_comm_phase: tol must be > 0");
    if (max_iters < 1) throw std::invalid_argument("optimize_comm_phase: max_iters must be >= 1");
    const Eigen::Index n = obj.h_b.cols();

    BcdResult result;
    Eigen::VectorXcd omega = Eigen::VectorXcd::Ones(n);
    Eigen::VectorXcd y = obj.h_b * omega + obj.h_a; // current field at the UE
    result.objective_trace.push_back(y.squaredNorm());

    for (int it = 0; it < max_iters; ++it) {
        for (Eigen::Index e = 0; e < n; ++e) {
            const Eigen::VectorXcd residual = y - obj.h_b.col(e) * omega[e];
            const std::complex<double> c = obj.h_b.col(e).dot(residual); // b_e^H r
            const double mag = std::abs(c);
            if (mag > 0.0) {
                omega[e] = c / mag; // align this element with the residual field
                y = residual + obj.h_b.col(e) * omega[e];
            }
        }
        const double value = y.squaredNorm();
        const double prev = result.objective_trace.back();
        result.objective_trace.push_back(value);
        if (value - prev <= tol * std::max(prev, 1e-300)) {
            result.converged = true;
            break;
        }
    }
    result.omega = PhaseConfig::checked(std::move(omega));
    return result;
}

BcdResult optimize_comm_phase(const ChannelContext& ctx, const TargetImage& sigma, double tol,
                              int max_iters) {
    return optimize_comm_phase(build_comm_objective(ctx, sigma), tol, max_iters);
}

SeReport se_report(const ChannelContext& ctx, const TargetImage& sigma,
                   const std::vector<PhaseConfig>& omega_sen, const ProtocolConfig& protocol,
                   double bcd_tol, int bcd_max_iters) {
    if (omega_sen.empty()) throw std::invalid_argument("se_report: empty sensing-phase list");
    const BcdResult bcd = optimize_comm_phase(ctx, sigma, bcd_tol, bcd_max_iters);
    const double se_com = spectral_efficiency(ctx, sigma, bcd.omega);
    double se_sen = 0.0;
    for (const auto& w : omega_sen) se_sen += spectral_efficiency(ctx, sigma, w);
    se_sen /= static_cast<double>(omega_sen.size());
    return average_se(se_com, se_sen, protocol);
}

std::string se_table_csv(const std::vector<SeTableRow>& rows) {
    std::ostringstream out;
    out.precision(10);
    out << "ris_size,se_com,se_sen,se_avg,se_loss_percent\n";
    for (const auto& row : rows) {
        out << row.ris_rows << 'x' << row.ris_cols << ',' << row.report.se_com << ','
            << row.report.se_sen << ',' << row.report.se_avg << ','
            << 100.0 * row.report.se_loss_fraction << '\n';
    }
    return out.str();
}

} // namespace risrec
