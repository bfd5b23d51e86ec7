#include "rgsl/autodiff/var.hpp"

#include <stdexcept>
#include <unordered_set>

namespace rgsl::ad {

namespace {
thread_local bool g_grad_enabled = true;
}

bool grad_enabled() noexcept { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

Var constant(Matrix value) {
    auto node = std::make_shared<Node>();
    node->value = std::move(value);
    return Var(std::move(node));
}

Var leaf(Parameter& param) {
    auto node = std::make_shared<Node>();
    node->value = param.value;
    node->param = &param;
    node->requires_grad = g_grad_enabled;
    return Var(std::move(node));
}

Var record(Matrix value, std::vector<Var> inputs, BackwardFn backward) {
    auto node = std::make_shared<Node>();
    node->value = std::move(value);
    bool any = false;
    for (const auto& in : inputs) any = any || in.requires_grad();
    if (g_grad_enabled && any) {
        node->requires_grad = true;
        node->inputs.reserve(inputs.size());
        for (auto& in : inputs) node->inputs.push_back(in.node());
        node->backward = std::move(backward);
    }
    return Var(std::move(node));
}

void backward(const Var& output) {
    if (!output.defined() || output.rows() != 1 || output.cols() != 1) {
        throw std::invalid_argument("backward() needs a scalar output");
    }
    if (!output.requires_grad()) return;

    // Iterative post-order DFS gives a topological order.
    std::vector<Node*> order;
    std::unordered_set<Node*> seen;
    std::vector<std::pair<Node*, std::size_t>> stack{{output.node().get(), 0}};
    seen.insert(output.node().get());
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->inputs.size()) {
            Node* child = node->inputs[next++].get();
            if (child->requires_grad && seen.insert(child).second) stack.emplace_back(child, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    output.node()->grad = Matrix::Ones(1, 1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Node* node = *it;
        if (node->grad.size() == 0) continue;
        if (node->backward) node->backward(node->grad, node->inputs);
        if (node->param != nullptr) {
            if (node->param->grad.size() == 0) {
                node->param->grad = node->grad;
            } else {
                node->param->grad += node->grad;
            }
        }
    }
}

}  // namespace rgsl::ad
