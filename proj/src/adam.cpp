#include "macl/adam.hpp"

#include "macl/errors.hpp"

#include <cmath>

namespace macl::nn {

Parameter make_parameter(std::string name, Var node) {
    if (!node || !node->requires_grad)
        throw ContractViolation("make_parameter: node must require gradients");
    Parameter p;
    p.name = std::move(name);
    p.node = std::move(node);
    p.m = Tensor(p.node->val.rows(), p.node->val.cols());
    p.v = Tensor(p.node->val.rows(), p.node->val.cols());
    return p;
}

void adam_step(const AdamConfig& cfg, std::vector<Parameter>& params) {
    for (Parameter& p : params) {
        Variable& var = *p.node;
        if (var.grad.size() == 0) continue; // untouched this step
        ++p.step_count;
        const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(p.step_count));
        const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(p.step_count));
        for (std::size_t i = 0; i < var.val.size(); ++i) {
            const double g = var.grad[i];
            p.m[i] = cfg.beta1 * p.m[i] + (1.0 - cfg.beta1) * g;
            p.v[i] = cfg.beta2 * p.v[i] + (1.0 - cfg.beta2) * g * g;
            const double mhat = p.m[i] / bc1;
            const double vhat = p.v[i] / bc2;
            var.val[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
        }
        if (!var.val.all_finite())
            throw NumericFault("non-finite value after optimizer step on " + p.name);
        var.grad = Tensor();
    }
}

} // namespace macl::nn
