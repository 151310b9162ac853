#pragma once

#include "macl/tensor.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace macl::nn {

// Reverse-mode autodiff over dense tensors. Each forward op records a node
// with a closure that scatters the node's gradient into its parents.
// Graphs are rebuilt every step; parameter leaves persist across steps.
struct Variable;
using Var = std::shared_ptr<Variable>;

struct Variable {
    Tensor val;
    Tensor grad; // allocated lazily, same shape as val
    bool requires_grad = false;
    std::vector<Var> parents;
    std::function<void(Variable&)> backprop;

    void ensure_grad() {
        if (grad.size() != val.size()) grad = Tensor(val.rows(), val.cols());
    }
    void zero_grad() {
        if (grad.size() == val.size()) grad.zero();
    }
};

Var leaf(Tensor t, bool requires_grad = true);
Var constant(Tensor t);

// Elementwise and linear-algebra primitives.
Var add(const Var& a, const Var& b);            // same shape
Var add_rowvec(const Var& a, const Var& b);     // (n,d) + broadcast (1,d)
Var sub(const Var& a, const Var& b);
Var matmul(const Var& a, const Var& b);         // (n,k) x (k,m)
Var matmul_nt(const Var& a, const Var& b);      // (n,k) x (m,k)^T
Var scale(const Var& a, double s);
Var add_scaled(const Var& a, const Var& b, double s); // a + s*b, same shape
Var elu(const Var& a);
Var mul_mask(const Var& a, const Tensor& mask); // elementwise by a constant
Var slice_rows(const Var& a, int lo, int hi);   // rows [lo, hi)
Var vstack(const Var& a, const Var& b);         // rows of a above rows of b
Var row_l2_normalize(const Var& a);             // zero rows stay zero
Var weighted_sum(const Var& a, const Tensor& w); // scalar sum(w .* a)
Var detach(const Var& a);                       // value copy, no gradient path

// Populates grad fields of every reachable variable with d(loss)/d(var).
// loss must be 1x1; anything else is a contract violation.
void backward(const Var& loss);

} // namespace macl::nn
