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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace risrec::ad {

// Dense real tensor of rank 1 or 2, row-major storage, double precision.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    static Tensor zeros_vector(std::size_t n) { return Tensor{{n}, std::vector<double>(n, 0.0)}; }
    static Tensor zeros_matrix(std::size_t r, std::size_t c) {
        return Tensor{{r, c}, std::vector<double>(r * c, 0.0)};
    }
    static Tensor scalar(double v) { return Tensor{{1}, {v}}; }
    static Tensor from_vector(const Eigen::VectorXd& v);
    static Tensor from_matrix(const Eigen::MatrixXd& m); // row-major copy

    std::size_t rank() const { return shape.size(); }
    std::size_t size() const { return data.size(); }
    std::size_t rows() const { return shape.at(0); }
    std::size_t cols() const { return rank() == 2 ? shape.at(1) : 1; }

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }
    double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

    Eigen::VectorXd to_vector() const;
    Eigen::MatrixXd to_matrix() const;

    bool same_shape(const Tensor& other) const { return shape == other.shape; }
    bool all_finite() const;
};

// Handle to a node on a tape.
struct Value {
    std::uint32_t id = UINT32_MAX;
    bool valid() const { return id != UINT32_MAX; }
};

// Records a forward computation and replays it in reverse to accumulate
// gradients. One backward pass per tape; leaves are the trainable inputs.
//
// Shape errors throw std::invalid_argument; a non-finite op output throws
// std::runtime_error naming the op.
class Tape {
  public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    // Trainable input; participates in gradient computation.
    Value leaf(Tensor t);
    // Non-trainable input; gradients are not propagated into it.
    Value constant(Tensor t);
    Value constant_vector(const Eigen::VectorXd& v) { return constant(Tensor::from_vector(v)); }
    Value constant_matrix(const Eigen::MatrixXd& m) { return constant(Tensor::from_matrix(m)); }

    // (m x k) * (k) -> (m), or (m x k) * (k x n) -> (m x n).
    Value matmul(Value a, Value b);
    Value add(Value a, Value b);      // same shape
    Value mul(Value a, Value b);      // elementwise, same shape
    Value relu(Value a);              // gradient at 0 is 0
    Value sigmoid(Value a);
    Value tanh(Value a);
    Value concat(Value a, Value b);   // rank-1 only
    Value slice(Value a, std::size_t offset, std::size_t len); // rank-1 only
    Value sum(Value a);               // full reduction to a scalar
    Value cos(Value a);
    Value sin(Value a);

    // Fused log-sum-exp-stabilized softmax + cross-entropy against a single
    // label. Returns a scalar loss.
    Value softmax_cross_entropy(Value logits, int label);

    // Runs the reverse pass from a scalar loss. The tape is consumed; a
    // second call throws std::logic_error.
    void backward(Value loss);

    const Tensor& value(Value v) const;
    // Gradient of the loss w.r.t. node v; zeros when the loss does not
    // depend on it. Only valid after backward().
    const Tensor& grad(Value v) const;

    std::size_t node_count() const { return nodes_.size(); }
    bool consumed() const { return consumed_; }

  private:
    enum class Op : std::uint8_t {
        Leaf, Const, MatMul, Add, Mul, Relu, Sigmoid, Tanh,
        Concat, Slice, Sum, Cos, Sin, SoftmaxCE
    };
    static const char* op_name(Op op);

    struct Node {
        Op op;
        std::uint32_t a = UINT32_MAX;
        std::uint32_t b = UINT32_MAX;
        std::int64_t aux0 = 0; // slice offset / CE label
        std::int64_t aux1 = 0; // slice length
        bool needs_grad = false;
        Tensor value;
        Tensor extra; // softmax probabilities for SoftmaxCE
    };

    Value push(Node node);
    const Node& node(Value v) const;
    Tensor& grad_slot(std::uint32_t id) const;
    void check_open() const;

    std::vector<Node> nodes_;
    mutable std::vector<Tensor> grads_;
    bool consumed_ = false;
};

// (cos(theta), sin(theta)) pair; the unit-modulus phase parameterization.
std::pair<Value, Value> phase_map(Tape& tape, Value theta);

// matmul(w, x) + b.
Value affine(Tape& tape, Value w, Value x, Value b);

// Numerically stable softmax of a plain vector (inference-side helper).
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

} // namespace risrec::ad
