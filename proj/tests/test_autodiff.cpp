// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "risrec/autodiff.hpp"
#include "risrec/rng.hpp"

using namespace risrec;
using ad::Tape;
using ad::Tensor;
using ad::Value;

namespace {

Tensor random_tensor_vec(std::size_t n, std::uint64_t seed, double scale = 1.0) {
    Rng rng(seed);
    Tensor t = Tensor::zeros_vector(n);
    for (double& v : t.data) v = scale * rng.next_uniform(-1.0, 1.0);
    return t;
}

Tensor random_tensor_mat(std::size_t r, std::size_t c, std::uint64_t seed, double scale = 1.0) {
    Rng rng(seed);
    Tensor t = Tensor::zeros_matrix(r, c);
    for (double& v : t.data) v = scale * rng.next_uniform(-1.0, 1.0);
    return t;
}

// FD check of a scalar graph built from one leaf vector.
void check_unary_gradient(const std::function<Value(Tape&, Value)>& build, std::uint64_t seed,
                          double shift = 0.0) {
    Tensor x0 = random_tensor_vec(6, seed);
    for (double& v : x0.data) v += shift;

    Tape tape;
    const Value x = tape.leaf(x0);
    const Value y = build(tape, x);
    tape.backward(y);
    const Tensor& g = tape.grad(x);

    const double h = 1e-5;
    for (std::size_t i = 0; i < x0.size(); ++i) {
        auto eval = [&](double delta) {
            Tensor xs = x0;
            xs.data[i] += delta;
            Tape t2;
            const Value xv = t2.leaf(xs);
            return t2.value(build(t2, xv))[0];
        };
        const double fd = (eval(h) - eval(-h)) / (2.0 * h);
        CHECK(std::abs(g.data[i] - fd) <= std::max(1e-5 * std::abs(fd), 1e-8));
    }
}

} // namespace

TEST_CASE("relu forward and gradient mask") {
    Tape tape;
    Tensor x = Tensor::zeros_vector(3);
    x.data = {-1.0, 0.0, 2.0};
    const Value v = tape.relu(tape.leaf(x));
    CHECK(tape.value(v).data == std::vector<double>{0.0, 0.0, 2.0});
    const Value loss = tape.sum(v);
    tape.backward(loss);
    CHECK(tape.grad(Value{0}).data == std::vector<double>{0.0, 0.0, 1.0});
}

TEST_CASE("uniform logits give log(n) cross entropy") {
    Tape tape;
    const Value logits = tape.leaf(Tensor::zeros_vector(10));
    const Value loss = tape.softmax_cross_entropy(logits, 3);
    CHECK(tape.value(loss)[0] == doctest::Approx(std::log(10.0)).epsilon(1e-12));
    CHECK(tape.value(loss)[0] == doctest::Approx(2.302585).epsilon(1e-6));
}

TEST_CASE("primitive gradients match central finite differences") {
    check_unary_gradient([](Tape& t, Value x) { return t.sum(t.sigmoid(x)); }, 11);
    check_unary_gradient([](Tape& t, Value x) { return t.sum(t.tanh(x)); }, 12);
    check_unary_gradient([](Tape& t, Value x) { return t.sum(t.cos(x)); }, 13);
    check_unary_gradient([](Tape& t, Value x) { return t.sum(t.sin(x)); }, 14);
    check_unary_gradient([](Tape& t, Value x) { return t.sum(t.mul(x, t.sigmoid(x))); }, 15);
    // relu away from the kink
    check_unary_gradient([](Tape& t, Value x) { return t.sum(t.relu(x)); }, 16, 2.0);
    check_unary_gradient([](Tape& t, Value x) { return t.softmax_cross_entropy(x, 2); }, 17);
    check_unary_gradient(
        [](Tape& t, Value x) {
            const Value a = t.slice(x, 0, 3);
            const Value b = t.slice(x, 3, 3);
            return t.sum(t.mul(t.concat(a, b), x));
        },
        18);
    check_unary_gradient(
        [](Tape& t, Value x) {
            const Tensor w = random_tensor_mat(4, 6, 999);
            return t.softmax_cross_entropy(t.matmul(t.constant(w), x), 1);
        },
        19);
}

TEST_CASE("matmul gradients for a linear map") {
    // loss = sum(W x): dW = 1 x^T, dx = W^T 1
    Tape tape;
    const Tensor w0 = random_tensor_mat(3, 4, 21);
    const Tensor x0 = random_tensor_vec(4, 22);
    const Value w = tape.leaf(w0);
    const Value x = tape.leaf(x0);
    tape.backward(tape.sum(tape.matmul(w, x)));

    const Tensor& gw = tape.grad(w);
    const Tensor& gx = tape.grad(x);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            CHECK(gw.at(r, c) == doctest::Approx(x0[c]).epsilon(1e-14));
        }
    }
    for (std::size_t c = 0; c < 4; ++c) {
        double col_sum = 0.0;
        for (std::size_t r = 0; r < 3; ++r) col_sum += w0.at(r, c);
        CHECK(gx[c] == doctest::Approx(col_sum).epsilon(1e-14));
    }
}

TEST_CASE("unused leaf receives an exact zero gradient") {
    Tape tape;
    const Value used = tape.leaf(random_tensor_vec(3, 31));
    const Value unused = tape.leaf(random_tensor_vec(5, 32));
    tape.backward(tape.sum(used));
    const Tensor& g = tape.grad(unused);
    for (double v : g.data) CHECK(v == 0.0);
}

TEST_CASE("phase map yields exactly unit-modulus phases and FD-correct gradients") {
    Tape tape;
    const Tensor theta0 = random_tensor_vec(5, 41, 3.0);
    const Value theta = tape.leaf(theta0);
    const auto [c, s] = ad::phase_map(tape, theta);
    for (std::size_t i = 0; i < 5; ++i) {
        const double re = tape.value(c)[i];
        const double im = tape.value(s)[i];
        CHECK(re * re + im * im == doctest::Approx(1.0).epsilon(1e-15));
    }
    // theta = 0 -> all-ones; theta = pi/2 -> all-j
    Tape t2;
    const auto [c0, s0] = ad::phase_map(t2, t2.leaf(Tensor::zeros_vector(4)));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(t2.value(c0)[i] == 1.0);
        CHECK(t2.value(s0)[i] == 0.0);
    }
    Tape t3;
    Tensor quarter = Tensor::zeros_vector(4);
    for (double& v : quarter.data) v = M_PI / 2.0;
    const auto [c1, s1] = ad::phase_map(t3, t3.leaf(quarter));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(t3.value(c1)[i]) < 1e-15);
        CHECK(t3.value(s1)[i] == doctest::Approx(1.0).epsilon(1e-15));
    }

    check_unary_gradient(
        [](Tape& t, Value x) {
            const auto [cc, ss] = ad::phase_map(t, x);
            const Tensor w = random_tensor_mat(3, 12, 404);
            return t.softmax_cross_entropy(t.matmul(t.constant(w), t.concat(cc, ss)), 0);
        },
        42);
}

TEST_CASE("complex product via stacked-real representation matches a direct oracle") {
    Rng rng(51);
    const int m = 3, n = 4;
    Eigen::MatrixXcd a(m, n);
    Eigen::VectorXcd x(n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < m; ++r) a(r, c) = rng.next_cnormal(1.0);
        x[c] = rng.next_cnormal(1.0);
    }
    const Eigen::VectorXcd direct = a * x;

    Tape tape;
    const Value prod = tape.matmul(tape.constant_matrix(stacked_real_matrix(a)),
                                   tape.constant_vector(stacked_real_vector(x)));
    const Eigen::VectorXd stacked = tape.value(prod).to_vector();
    for (int i = 0; i < m; ++i) {
        CHECK(std::abs(stacked[i] - direct[i].real()) < 1e-12);
        CHECK(std::abs(stacked[i + m] - direct[i].imag()) < 1e-12);
    }
}

TEST_CASE("error contracts") {
    Tape tape;
    const Value a = tape.leaf(random_tensor_vec(3, 61));
    const Value b = tape.leaf(random_tensor_vec(4, 62));
    CHECK_THROWS_AS(tape.add(a, b), std::invalid_argument);
    CHECK_THROWS_AS(tape.mul(a, b), std::invalid_argument);
    CHECK_THROWS_AS(tape.matmul(a, b), std::invalid_argument);
    CHECK_THROWS_AS(tape.slice(a, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(tape.backward(a), std::invalid_argument); // non-scalar loss

    // non-finite detection names the op
    Tensor big = Tensor::zeros_vector(2);
    big.data = {1e308, 1e308};
    const Value v = tape.leaf(big);
    CHECK_THROWS_WITH_AS(tape.add(v, v), doctest::Contains("add"), std::runtime_error);

    // single backward per tape
    Tape t2;
    const Value x = t2.leaf(random_tensor_vec(2, 63));
    const Value loss = t2.sum(x);
    t2.backward(loss);
    CHECK_THROWS_AS(t2.backward(loss), std::logic_error);
    CHECK_THROWS_AS(t2.sum(x), std::logic_error); // consumed tape rejects new ops
}

TEST_CASE("tape size is linear in the episode op count") {
    // building the same block twice exactly doubles the node count
    auto build = [](Tape& t, Value x) {
        const Value y = t.relu(x);
        const Value z = t.sigmoid(y);
        return t.mul(y, z);
    };
    Tape tape;
    const Value x = tape.leaf(random_tensor_vec(4, 71));
    const std::size_t base = tape.node_count();
    build(tape, x);
    const std::size_t once = tape.node_count();
    build(tape, x);
    const std::size_t twice = tape.node_count();
    CHECK(once - base == 3);
    CHECK(twice - once == once - base);
}
