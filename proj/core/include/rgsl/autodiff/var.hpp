#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rgsl::ad {

using Matrix = Eigen::MatrixXd;

/// A trainable array with its accumulated gradient.
struct Parameter {
    std::string name;
    Matrix value;
    Matrix grad;

    Parameter() = default;
    Parameter(std::string param_name, Matrix initial)
        : name(std::move(param_name)), value(std::move(initial)),
          grad(Matrix::Zero(value.rows(), value.cols())) {}

    void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

struct Node;
using NodePtr = std::shared_ptr<Node>;

/// Pushes the node's output gradient into its inputs.
using BackwardFn = std::function<void(const Matrix& grad_out, std::vector<NodePtr>& inputs)>;

struct Node {
    Matrix value;
    Matrix grad;
    std::vector<NodePtr> inputs;
    BackwardFn backward;
    Parameter* param = nullptr;
    bool requires_grad = false;

    void accumulate(const Matrix& g) {
        if (grad.size() == 0) {
            grad = g;
        } else {
            grad += g;
        }
    }
};

/// Handle to a value in a dynamically recorded computation graph.
class Var {
public:
    Var() = default;
    explicit Var(NodePtr node) : node_(std::move(node)) {}

    const Matrix& value() const { return node_->value; }
    const Matrix& grad() const { return node_->grad; }
    Eigen::Index rows() const { return node_->value.rows(); }
    Eigen::Index cols() const { return node_->value.cols(); }
    bool requires_grad() const { return node_ && node_->requires_grad; }
    bool defined() const { return static_cast<bool>(node_); }
    const NodePtr& node() const { return node_; }

private:
    NodePtr node_;
};

/// Constant input; gradients are not tracked through it.
Var constant(Matrix value);
/// Leaf bound to a parameter; backward() accumulates into `param.grad`.
Var leaf(Parameter& param);

/// Records a new node. When grad mode is off or no input requires grad the
/// backward closure and input references are dropped immediately.
Var record(Matrix value, std::vector<Var> inputs, BackwardFn backward);

/// Reverse sweep from a 1x1 output.
void backward(const Var& output);

bool grad_enabled() noexcept;

/// Disables graph recording in the current thread for its lifetime.
class NoGradGuard {
public:
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;

private:
    bool previous_;
};

}  // namespace rgsl::ad
