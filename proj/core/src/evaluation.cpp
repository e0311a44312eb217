// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "risrec/evaluation.hpp"

#include <sstream>
#include <stdexcept>

namespace risrec {

int argmax_class(const Eigen::VectorXd& probabilities) {
    int best = 0;
    for (int i = 1; i < probabilities.size(); ++i) {
        if (probabilities[i] > probabilities[best]) best = i;
    }
    return best;
}

EvalReport prediction_rate(const std::vector<Eigen::VectorXd>& predictions,
                           const std::vector<int>& labels) {
    if (predictions.empty() || predictions.size() != labels.size()) {
        throw std::invalid_argument("prediction_rate: empty input or length mismatch");
    }
    const int n_classes = static_cast<int>(predictions.front().size());
    EvalReport report;
    report.total = static_cast<int>(predictions.size());
    report.confusion = Eigen::MatrixXi::Zero(n_classes, n_classes);
    int correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const int label = labels[i];
        if (label < 0 || label >= n_classes) {
            throw std::invalid_argument("prediction_rate: label out of range");
        }
        const int pred = argmax_class(predictions[i]);
        report.confusion(label, pred) += 1;
        if (pred == label) ++correct;
    }
    report.eta = static_cast<double>(correct) / static_cast<double>(report.total);
    return report;
}

Eigen::MatrixXd phase_correlation(const std::vector<PhaseConfig>& omegas) {
    if (omegas.empty()) throw std::invalid_argument("phase_correlation: empty list");
    const Eigen::Index len = omegas.front().omega.size();
    for (const auto& w : omegas) {
        if (w.omega.size() != len) {
            throw std::invalid_argument("phase_correlation: phase length mismatch");
        }
    }
    const int k = static_cast<int>(omegas.size());
    Eigen::MatrixXd corr(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            const double num = std::abs(omegas[static_cast<std::size_t>(i)].omega.dot(
                omegas[static_cast<std::size_t>(j)].omega));
            const double den = omegas[static_cast<std::size_t>(i)].omega.norm() *
                               omegas[static_cast<std::size_t>(j)].omega.norm();
            corr(i, j) = corr(j, i) = num / den;
        }
    }
    return corr;
}

Eigen::MatrixXd averaged_correlation(const std::vector<EpisodeTrace>& traces) {
    if (traces.empty()) throw std::invalid_argument("averaged_correlation: empty trace list");
    const std::size_t k = traces.front().omegas.size();
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(static_cast<int>(k), static_cast<int>(k));
    for (const auto& trace : traces) {
        if (trace.omegas.size() != k) {
            throw std::invalid_argument("averaged_correlation: traces disagree on K");
        }
        std::vector<PhaseConfig> phases;
        phases.reserve(k);
        for (const auto& w : trace.omegas) phases.push_back(PhaseConfig::unchecked(w));
        sum += phase_correlation(phases);
    }
    return sum / static_cast<double>(traces.size());
}

double mean_offdiag_from(const Eigen::MatrixXd& corr, int first_step) {
    const int k = static_cast<int>(corr.rows());
    if (first_step >= k) throw std::invalid_argument("mean_offdiag_from: first_step out of range");
    double sum = 0.0;
    int count = 0;
    for (int i = first_step; i < k; ++i) {
        for (int j = first_step; j < k; ++j) {
            if (i == j) continue;
            sum += corr(i, j);
            ++count;
        }
    }
    if (count == 0) throw std::invalid_argument("mean_offdiag_from: no off-diagonal entries");
    return sum / static_cast<double>(count);
}

std::string matrix_to_text(const Eigen::MatrixXd& m) {
    std::ostringstream out;
    out.precision(10);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out << ' ';
            out << m(r, c);
        }
        out << '\n';
    }
    return out.str();
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
    std::ostringstream out;
    out.precision(10);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out << ',';
            out << m(r, c);
        }
        out << '\n';
    }
    return out.str();
}

} // namespace risrec
