// SPDX-License-Identifier: Apache-2.0
//
// risrec - adaptive RIS-aided target recognition simulator
// Copyright (C) 2026 risrec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "risrec/autodiff.hpp"

#include <cmath>
#include <stdexcept>

namespace risrec::ad {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using MapConstMat = Eigen::Map<const RowMat>;
using MapVec = Eigen::Map<Eigen::VectorXd>;
using MapConstVec = Eigen::Map<const Eigen::VectorXd>;

MapConstMat as_matrix(const Tensor& t) {
    return MapConstMat(t.data.data(), static_cast<Eigen::Index>(t.rows()),
                       static_cast<Eigen::Index>(t.cols()));
}

MapMat as_matrix(Tensor& t) {
    return MapMat(t.data.data(), static_cast<Eigen::Index>(t.rows()),
                  static_cast<Eigen::Index>(t.cols()));
}

MapConstVec as_vector(const Tensor& t) {
    return MapConstVec(t.data.data(), static_cast<Eigen::Index>(t.size()));
}

MapVec as_vector(Tensor& t) {
    return MapVec(t.data.data(), static_cast<Eigen::Index>(t.size()));
}

} // namespace

Tensor Tensor::from_vector(const Eigen::VectorXd& v) {
    Tensor t;
    t.shape = {static_cast<std::size_t>(v.size())};
    t.data.assign(v.data(), v.data() + v.size());
    return t;
}

Tensor Tensor::from_matrix(const Eigen::MatrixXd& m) {
    Tensor t;
    t.shape = {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())};
    t.data.resize(t.shape[0] * t.shape[1]);
    MapMat(t.data.data(), m.rows(), m.cols()) = m;
    return t;
}

Eigen::VectorXd Tensor::to_vector() const { return as_vector(*this); }

Eigen::MatrixXd Tensor::to_matrix() const { return as_matrix(*this); }

bool Tensor::all_finite() const {
    for (double v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

const char* Tape::op_name(Op op) {
    switch (op) {
        case Op::Leaf: return "leaf";
        case Op::Const: return "const";
        case Op::MatMul: return "matmul";
        case Op::Add: return "add";
        case Op::Mul: return "mul";
        case Op::Relu: return "relu";
        case Op::Sigmoid: return "sigmoid";
        case Op::Tanh: return "tanh";
        case Op::Concat: return "concat";
        case Op::Slice: return "slice";
        case Op::Sum: return "sum";
        case Op::Cos: return "cos";
        case Op::Sin: return "sin";
        case Op::SoftmaxCE: return "softmax_cross_entropy";
    }
    return "?";
}

void Tape::check_open() const {
    if (consumed_) throw std::logic_error("autodiff: tape already consumed by backward()");
}

Value Tape::push(Node node) {
    check_open();
    if (!node.value.all_finite()) {
        throw std::runtime_error(std::string("autodiff: op '") + op_name(node.op) +
                                 "' produced a non-finite value");
    }
    nodes_.push_back(std::move(node));
    return Value{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

const Tape::Node& Tape::node(Value v) const {
    if (!v.valid() || v.id >= nodes_.size()) {
        throw std::invalid_argument("autodiff: invalid value handle");
    }
    return nodes_[v.id];
}

Value Tape::leaf(Tensor t) {
    Node n;
    n.op = Op::Leaf;
    n.needs_grad = true;
    n.value = std::move(t);
    return push(std::move(n));
}

Value Tape::constant(Tensor t) {
    Node n;
    n.op = Op::Const;
    n.needs_grad = false;
    n.value = std::move(t);
    return push(std::move(n));
}

Value Tape::matmul(Value a, Value b) {
    const Node& na = node(a);
    const Node& nb = node(b);
    if (na.value.rank() != 2) throw std::invalid_argument("matmul: left operand must be rank 2");
    if (na.value.cols() != nb.value.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
    Node n;
    n.op = Op::MatMul;
    n.a = a.id;
    n.b = b.id;
    n.needs_grad = na.needs_grad || nb.needs_grad;
    if (nb.value.rank() == 1) {
        n.value = Tensor::zeros_vector(na.value.rows());
        as_vector(n.value) = as_matrix(na.value) * as_vector(nb.value);
    } else {
        n.value = Tensor::zeros_matrix(na.value.rows(), nb.value.cols());
        as_matrix(n.value) = as_matrix(na.value) * as_matrix(nb.value);
    }
    return push(std::move(n));
}

Value Tape::add(Value a, Value b) {
    const Node& na = node(a);
    const Node& nb = node(b);
    if (!na.value.same_shape(nb.value)) throw std::invalid_argument("add: shape mismatch");
    Node n;
    n.op = Op::Add;
    n.a = a.id;
    n.b = b.id;
    n.needs_grad = na.needs_grad || nb.needs_grad;
    n.value = na.value;
    as_vector(n.value) += as_vector(nb.value);
    return push(std::move(n));
}

Value Tape::mul(Value a, Value b) {
    const Node& na = node(a);
    const Node& nb = node(b);
    if (!na.value.same_shape(nb.value)) throw std::invalid_argument("mul: shape mismatch");
    Node n;
    n.op = Op::Mul;
    n.a = a.id;
    n.b = b.id;
    n.needs_grad = na.needs_grad || nb.needs_grad;
    n.value = na.value;
    as_vector(n.value).array() *= as_vector(nb.value).array();
    return push(std::move(n));
}

namespace {

template <typename F>
Tensor map_unary(const Tensor& in, F f) {
    Tensor out = in;
    for (double& v : out.data) v = f(v);
    return out;
}

} // namespace

Value Tape::relu(Value a) {
    Node n;
    n.op = Op::Relu;
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    n.value = map_unary(node(a).value, [](double v) { return v > 0.0 ? v : 0.0; });
    return push(std::move(n));
}

Value Tape::sigmoid(Value a) {
    Node n;
    n.op = Op::Sigmoid;
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    n.value = map_unary(node(a).value, [](double v) {
        // branch on sign to avoid overflow in exp
        if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
    });
    return push(std::move(n));
}

Value Tape::tanh(Value a) {
    Node n;
    n.op = Op::Tanh;
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    n.value = map_unary(node(a).value, [](double v) { return std::tanh(v); });
    return push(std::move(n));
}

Value Tape::concat(Value a, Value b) {
    const Node& na = node(a);
    const Node& nb = node(b);
    if (na.value.rank() != 1 || nb.value.rank() != 1) {
        throw std::invalid_argument("concat: operands must be rank 1");
    }
    Node n;
    n.op = Op::Concat;
    n.a = a.id;
    n.b = b.id;
    n.needs_grad = na.needs_grad || nb.needs_grad;
    n.value = Tensor::zeros_vector(na.value.size() + nb.value.size());
    std::copy(na.value.data.begin(), na.value.data.end(), n.value.data.begin());
    std::copy(nb.value.data.begin(), nb.value.data.end(),
              n.value.data.begin() + static_cast<std::ptrdiff_t>(na.value.size()));
    return push(std::move(n));
}

Value Tape::slice(Value a, std::size_t offset, std::size_t len) {
    const Node& na = node(a);
    if (na.value.rank() != 1) throw std::invalid_argument("slice: operand must be rank 1");
    if (offset + len > na.value.size()) throw std::invalid_argument("slice: out of range");
    Node n;
    n.op = Op::Slice;
    n.a = a.id;
    n.aux0 = static_cast<std::int64_t>(offset);
    n.aux1 = static_cast<std::int64_t>(len);
    n.needs_grad = na.needs_grad;
    n.value = Tensor::zeros_vector(len);
    std::copy(na.value.data.begin() + static_cast<std::ptrdiff_t>(offset),
              na.value.data.begin() + static_cast<std::ptrdiff_t>(offset + len),
              n.value.data.begin());
    return push(std::move(n));
}

Value Tape::sum(Value a) {
    Node n;
    n.op = Op::Sum;
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    n.value = Tensor::scalar(as_vector(node(a).value).sum());
    return push(std::move(n));
}

Value Tape::cos(Value a) {
    Node n;
    n.op = Op::Cos;
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    n.value = map_unary(node(a).value, [](double v) { return std::cos(v); });
    return push(std::move(n));
}

Value Tape::sin(Value a) {
    Node n;
    n.op = Op::Sin;
    n.a = a.id;
    n.needs_grad = node(a).needs_grad;
    n.value = map_unary(node(a).value, [](double v) { return std::sin(v); });
    return push(std::move(n));
}

Value Tape::softmax_cross_entropy(Value logits, int label) {
    const Node& nl = node(logits);
    if (nl.value.rank() != 1) throw std::invalid_argument("softmax_cross_entropy: logits must be rank 1");
    if (label < 0 || static_cast<std::size_t>(label) >= nl.value.size()) {
        throw std::invalid_argument("softmax_cross_entropy: label out of range");
    }
    const auto x = as_vector(nl.value);
    const double m = x.maxCoeff();
    const Eigen::VectorXd shifted = (x.array() - m).exp();
    const double z = shifted.sum();

    Node n;
    n.op = Op::SoftmaxCE;
    n.a = logits.id;
    n.aux0 = label;
    n.needs_grad = nl.needs_grad;
    n.value = Tensor::scalar(m + std::log(z) - x[label]);
    n.extra = Tensor::from_vector(shifted / z);
    return push(std::move(n));
}

Tensor& Tape::grad_slot(std::uint32_t id) const {
    Tensor& g = grads_[id];
    if (g.data.empty()) {
        const Tensor& v = nodes_[id].value;
        g.shape = v.shape;
        g.data.assign(v.size(), 0.0);
    }
    return g;
}

void Tape::backward(Value loss) {
    check_open();
    const Node& ln = node(loss);
    if (ln.value.size() != 1) throw std::invalid_argument("backward: loss must be a scalar");
    consumed_ = true;
    grads_.assign(nodes_.size(), Tensor{});
    grad_slot(loss.id).data[0] = 1.0;

    for (std::uint32_t id = loss.id + 1; id-- > 0;) {
        const Node& n = nodes_[id];
        if (!n.needs_grad || grads_[id].data.empty()) continue;
        const Tensor& gy = grads_[id];
        switch (n.op) {
            case Op::Leaf:
            case Op::Const:
                break;
            case Op::MatMul: {
                const Node& na = nodes_[n.a];
                const Node& nb = nodes_[n.b];
                if (nb.value.rank() == 1) {
                    if (na.needs_grad) {
                        as_matrix(grad_slot(n.a)).noalias() +=
                            as_vector(gy) * as_vector(nb.value).transpose();
                    }
                    if (nb.needs_grad) {
                        as_vector(grad_slot(n.b)).noalias() +=
                            as_matrix(na.value).transpose() * as_vector(gy);
                    }
                } else {
                    if (na.needs_grad) {
                        as_matrix(grad_slot(n.a)).noalias() +=
                            as_matrix(gy) * as_matrix(nb.value).transpose();
                    }
                    if (nb.needs_grad) {
                        as_matrix(grad_slot(n.b)).noalias() +=
                            as_matrix(na.value).transpose() * as_matrix(gy);
                    }
                }
                break;
            }
            case Op::Add: {
                if (nodes_[n.a].needs_grad) as_vector(grad_slot(n.a)) += as_vector(gy);
                if (nodes_[n.b].needs_grad) as_vector(grad_slot(n.b)) += as_vector(gy);
                break;
            }
            case Op::Mul: {
                if (nodes_[n.a].needs_grad) {
                    as_vector(grad_slot(n.a)).array() +=
                        as_vector(gy).array() * as_vector(nodes_[n.b].value).array();
                }
                if (nodes_[n.b].needs_grad) {
                    as_vector(grad_slot(n.b)).array() +=
                        as_vector(gy).array() * as_vector(nodes_[n.a].value).array();
                }
                break;
            }
            case Op::Relu: {
                Tensor& ga = grad_slot(n.a);
                const Tensor& x = nodes_[n.a].value;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    if (x.data[i] > 0.0) ga.data[i] += gy.data[i];
                }
                break;
            }
            case Op::Sigmoid: {
                Tensor& ga = grad_slot(n.a);
                for (std::size_t i = 0; i < n.value.size(); ++i) {
                    const double y = n.value.data[i];
                    ga.data[i] += gy.data[i] * y * (1.0 - y);
                }
                break;
            }
            case Op::Tanh: {
                Tensor& ga = grad_slot(n.a);
                for (std::size_t i = 0; i < n.value.size(); ++i) {
                    const double y = n.value.data[i];
                    ga.data[i] += gy.data[i] * (1.0 - y * y);
                }
                break;
            }
            case Op::Concat: {
                const std::size_t na_size = nodes_[n.a].value.size();
                if (nodes_[n.a].needs_grad) {
                    Tensor& ga = grad_slot(n.a);
                    for (std::size_t i = 0; i < na_size; ++i) ga.data[i] += gy.data[i];
                }
                if (nodes_[n.b].needs_grad) {
                    Tensor& gb = grad_slot(n.b);
                    for (std::size_t i = 0; i < gb.size(); ++i) gb.data[i] += gy.data[na_size + i];
                }
                break;
            }
            case Op::Slice: {
                Tensor& ga = grad_slot(n.a);
                const std::size_t off = static_cast<std::size_t>(n.aux0);
                for (std::size_t i = 0; i < n.value.size(); ++i) ga.data[off + i] += gy.data[i];
                break;
            }
            case Op::Sum: {
                Tensor& ga = grad_slot(n.a);
                const double g = gy.data[0];
                for (double& v : ga.data) v += g;
                break;
            }
            case Op::Cos: {
                Tensor& ga = grad_slot(n.a);
                const Tensor& x = nodes_[n.a].value;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    ga.data[i] -= gy.data[i] * std::sin(x.data[i]);
                }
                break;
            }
            case Op::Sin: {
                Tensor& ga = grad_slot(n.a);
                const Tensor& x = nodes_[n.a].value;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    ga.data[i] += gy.data[i] * std::cos(x.data[i]);
                }
                break;
            }
            case Op::SoftmaxCE: {
                Tensor& ga = grad_slot(n.a);
                const double g = gy.data[0];
                const std::size_t label = static_cast<std::size_t>(n.aux0);
                for (std::size_t i = 0; i < ga.size(); ++i) {
                    double p = n.extra.data[i];
                    if (i == label) p -= 1.0;
                    ga.data[i] += g * p;
                }
                break;
            }
        }
    }
}

const Tensor& Tape::value(Value v) const { return node(v).value; }

const Tensor& Tape::grad(Value v) const {
    if (!consumed_) throw std::logic_error("autodiff: grad() before backward()");
    (void)node(v);
    return grad_slot(v.id);
}

std::pair<Value, Value> phase_map(Tape& tape, Value theta) {
    return {tape.cos(theta), tape.sin(theta)};
}

Value affine(Tape& tape, Value w, Value x, Value b) {
    return tape.add(tape.matmul(w, x), b);
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
    const double m = logits.maxCoeff();
    Eigen::VectorXd e = (logits.array() - m).exp();
    return e / e.sum();
}

} // namespace risrec::ad
