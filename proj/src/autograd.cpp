#include "macl/autograd.hpp"

#include "macl/errors.hpp"

#include <cmath>
#include <unordered_set>

namespace macl::nn {

namespace {

Var make_node(Tensor val, std::vector<Var> parents, std::function<void(Variable&)> backprop) {
    auto v = std::make_shared<Variable>();
    v->val = std::move(val);
    v->parents = std::move(parents);
    for (const auto& p : v->parents) {
        if (p->requires_grad) {
            v->requires_grad = true;
            break;
        }
    }
    if (v->requires_grad) v->backprop = std::move(backprop);
    return v;
}

void check_same_shape(const Var& a, const Var& b, const char* op) {
    if (!a->val.same_shape(b->val))
        throw ContractViolation(std::string(op) + ": shape mismatch");
}

} // namespace

Var leaf(Tensor t, bool requires_grad) {
    auto v = std::make_shared<Variable>();
    v->val = std::move(t);
    v->requires_grad = requires_grad;
    return v;
}

Var constant(Tensor t) { return leaf(std::move(t), false); }

Var add(const Var& a, const Var& b) {
    check_same_shape(a, b, "add");
    Tensor out = a->val;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b->val[i];
    return make_node(std::move(out), {a, b}, [](Variable& self) {
        for (int k = 0; k < 2; ++k) {
            Variable& p = *self.parents[k];
            if (!p.requires_grad) continue;
            p.ensure_grad();
            for (std::size_t i = 0; i < p.grad.size(); ++i) p.grad[i] += self.grad[i];
        }
    });
}

Var add_rowvec(const Var& a, const Var& b) {
    if (b->val.rows() != 1 || b->val.cols() != a->val.cols())
        throw ContractViolation("add_rowvec: bias must be 1 x cols(a)");
    Tensor out = a->val;
    for (int r = 0; r < out.rows(); ++r)
        for (int c = 0; c < out.cols(); ++c) out(r, c) += b->val(0, c);
    return make_node(std::move(out), {a, b}, [](Variable& self) {
        Variable& pa = *self.parents[0];
        Variable& pb = *self.parents[1];
        if (pa.requires_grad) {
            pa.ensure_grad();
            for (std::size_t i = 0; i < pa.grad.size(); ++i) pa.grad[i] += self.grad[i];
        }
        if (pb.requires_grad) {
            pb.ensure_grad();
            for (int r = 0; r < self.grad.rows(); ++r)
                for (int c = 0; c < self.grad.cols(); ++c) pb.grad(0, c) += self.grad(r, c);
        }
    });
}

Var sub(const Var& a, const Var& b) {
    check_same_shape(a, b, "sub");
    Tensor out = a->val;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b->val[i];
    return make_node(std::move(out), {a, b}, [](Variable& self) {
        Variable& pa = *self.parents[0];
        Variable& pb = *self.parents[1];
        if (pa.requires_grad) {
            pa.ensure_grad();
            for (std::size_t i = 0; i < pa.grad.size(); ++i) pa.grad[i] += self.grad[i];
        }
        if (pb.requires_grad) {
            pb.ensure_grad();
            for (std::size_t i = 0; i < pb.grad.size(); ++i) pb.grad[i] -= self.grad[i];
        }
    });
}

Var matmul(const Var& a, const Var& b) {
    if (a->val.cols() != b->val.rows()) throw ContractViolation("matmul: inner dimensions differ");
    const int n = a->val.rows(), k = a->val.cols(), m = b->val.cols();
    Tensor out(n, m);
    for (int i = 0; i < n; ++i) {
        const double* ai = a->val.row(i);
        double* oi = out.row(i);
        for (int t = 0; t < k; ++t) {
            const double av = ai[t];
            if (av == 0.0) continue;
            const double* bt = b->val.row(t);
            for (int j = 0; j < m; ++j) oi[j] += av * bt[j];
        }
    }
    return make_node(std::move(out), {a, b}, [n, k, m](Variable& self) {
        Variable& pa = *self.parents[0];
        Variable& pb = *self.parents[1];
        if (pa.requires_grad) {
            pa.ensure_grad(); // dA = G * B^T
            for (int i = 0; i < n; ++i) {
                const double* gi = self.grad.row(i);
                double* dai = pa.grad.row(i);
                for (int t = 0; t < k; ++t) {
                    const double* bt = pb.val.row(t);
                    double acc = 0.0;
                    for (int j = 0; j < m; ++j) acc += gi[j] * bt[j];
                    dai[t] += acc;
                }
            }
        }
        if (pb.requires_grad) {
            pb.ensure_grad(); // dB = A^T * G
            for (int i = 0; i < n; ++i) {
                const double* ai = pa.val.row(i);
                const double* gi = self.grad.row(i);
                for (int t = 0; t < k; ++t) {
                    const double av = ai[t];
                    if (av == 0.0) continue;
                    double* dbt = pb.grad.row(t);
                    for (int j = 0; j < m; ++j) dbt[j] += av * gi[j];
                }
            }
        }
    });
}

Var matmul_nt(const Var& a, const Var& b) {
    if (a->val.cols() != b->val.cols()) throw ContractViolation("matmul_nt: inner dimensions differ");
    const int n = a->val.rows(), k = a->val.cols(), m = b->val.rows();
    Tensor out(n, m);
    for (int i = 0; i < n; ++i) {
        const double* ai = a->val.row(i);
        double* oi = out.row(i);
        for (int j = 0; j < m; ++j) {
            const double* bj = b->val.row(j);
            double acc = 0.0;
            for (int t = 0; t < k; ++t) acc += ai[t] * bj[t];
            oi[j] = acc;
        }
    }
    return make_node(std::move(out), {a, b}, [n, k, m](Variable& self) {
        Variable& pa = *self.parents[0];
        Variable& pb = *self.parents[1];
        if (pa.requires_grad) {
            pa.ensure_grad(); // dA = G * B
            for (int i = 0; i < n; ++i) {
                const double* gi = self.grad.row(i);
                double* dai = pa.grad.row(i);
                for (int j = 0; j < m; ++j) {
                    const double g = gi[j];
                    if (g == 0.0) continue;
                    const double* bj = pb.val.row(j);
                    for (int t = 0; t < k; ++t) dai[t] += g * bj[t];
                }
            }
        }
        if (pb.requires_grad) {
            pb.ensure_grad(); // dB = G^T * A
            for (int i = 0; i < n; ++i) {
                const double* gi = self.grad.row(i);
                const double* ai = pa.val.row(i);
                for (int j = 0; j < m; ++j) {
                    const double g = gi[j];
                    if (g == 0.0) continue;
                    double* dbj = pb.grad.row(j);
                    for (int t = 0; t < k; ++t) dbj[t] += g * ai[t];
                }
            }
        }
    });
}

Var scale(const Var& a, double s) {
    Tensor out = a->val;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= s;
    return make_node(std::move(out), {a}, [s](Variable& self) {
        Variable& p = *self.parents[0];
        p.ensure_grad();
        for (std::size_t i = 0; i < p.grad.size(); ++i) p.grad[i] += s * self.grad[i];
    });
}

Var add_scaled(const Var& a, const Var& b, double s) {
    check_same_shape(a, b, "add_scaled");
    Tensor out = a->val;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * b->val[i];
    return make_node(std::move(out), {a, b}, [s](Variable& self) {
        Variable& pa = *self.parents[0];
        Variable& pb = *self.parents[1];
        if (pa.requires_grad) {
            pa.ensure_grad();
            for (std::size_t i = 0; i < pa.grad.size(); ++i) pa.grad[i] += self.grad[i];
        }
        if (pb.requires_grad) {
            pb.ensure_grad();
            for (std::size_t i = 0; i < pb.grad.size(); ++i) pb.grad[i] += s * self.grad[i];
        }
    });
}

Var elu(const Var& a) {
    Tensor out = a->val;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = out[i] > 0.0 ? out[i] : std::expm1(out[i]);
    return make_node(std::move(out), {a}, [](Variable& self) {
        Variable& p = *self.parents[0];
        p.ensure_grad();
        for (std::size_t i = 0; i < p.grad.size(); ++i) {
            const double x = p.val[i];
            const double d = x > 0.0 ? 1.0 : std::exp(x);
            p.grad[i] += d * self.grad[i];
        }
    });
}

Var mul_mask(const Var& a, const Tensor& mask) {
    if (!a->val.same_shape(mask)) throw ContractViolation("mul_mask: shape mismatch");
    Tensor out = a->val;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
    return make_node(std::move(out), {a}, [mask](Variable& self) {
        Variable& p = *self.parents[0];
        p.ensure_grad();
        for (std::size_t i = 0; i < p.grad.size(); ++i) p.grad[i] += mask[i] * self.grad[i];
    });
}

Var slice_rows(const Var& a, int lo, int hi) {
    if (lo < 0 || hi > a->val.rows() || lo >= hi)
        throw ContractViolation("slice_rows: bad range");
    const int cols = a->val.cols();
    Tensor out(hi - lo, cols);
    for (int r = lo; r < hi; ++r)
        for (int c = 0; c < cols; ++c) out(r - lo, c) = a->val(r, c);
    return make_node(std::move(out), {a}, [lo, cols](Variable& self) {
        Variable& p = *self.parents[0];
        p.ensure_grad();
        for (int r = 0; r < self.grad.rows(); ++r)
            for (int c = 0; c < cols; ++c) p.grad(lo + r, c) += self.grad(r, c);
    });
}

Var vstack(const Var& a, const Var& b) {
    if (a->val.cols() != b->val.cols()) throw ContractViolation("vstack: column counts differ");
    const int na = a->val.rows(), nb = b->val.rows(), cols = a->val.cols();
    Tensor out(na + nb, cols);
    for (int r = 0; r < na; ++r)
        for (int c = 0; c < cols; ++c) out(r, c) = a->val(r, c);
    for (int r = 0; r < nb; ++r)
        for (int c = 0; c < cols; ++c) out(na + r, c) = b->val(r, c);
    return make_node(std::move(out), {a, b}, [na, nb, cols](Variable& self) {
        Variable& pa = *self.parents[0];
        Variable& pb = *self.parents[1];
        if (pa.requires_grad) {
            pa.ensure_grad();
            for (int r = 0; r < na; ++r)
                for (int c = 0; c < cols; ++c) pa.grad(r, c) += self.grad(r, c);
        }
        if (pb.requires_grad) {
            pb.ensure_grad();
            for (int r = 0; r < nb; ++r)
                for (int c = 0; c < cols; ++c) pb.grad(r, c) += self.grad(na + r, c);
        }
    });
}

Var row_l2_normalize(const Var& a) {
    const int n = a->val.rows(), d = a->val.cols();
    Tensor out(n, d);
    std::vector<double> norms(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* xi = a->val.row(i);
        double s = 0.0;
        for (int c = 0; c < d; ++c) s += xi[c] * xi[c];
        norms[i] = std::sqrt(s);
        if (norms[i] > 0.0) {
            double* oi = out.row(i);
            for (int c = 0; c < d; ++c) oi[c] = xi[c] / norms[i];
        }
    }
    return make_node(std::move(out), {a}, [norms, n, d](Variable& self) {
        Variable& p = *self.parents[0];
        p.ensure_grad();
        // y = x/|x|; dL/dx = (g - (g.y) y) / |x|. Zero rows keep zero gradient.
        for (int i = 0; i < n; ++i) {
            if (norms[i] <= 0.0) continue;
            const double* gi = self.grad.row(i);
            const double* yi = self.val.row(i);
            double dot = 0.0;
            for (int c = 0; c < d; ++c) dot += gi[c] * yi[c];
            double* dxi = p.grad.row(i);
            for (int c = 0; c < d; ++c) dxi[c] += (gi[c] - dot * yi[c]) / norms[i];
        }
    });
}

Var weighted_sum(const Var& a, const Tensor& w) {
    if (!a->val.same_shape(w)) throw ContractViolation("weighted_sum: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * a->val[i];
    return make_node(Tensor::scalar(acc), {a}, [w](Variable& self) {
        Variable& p = *self.parents[0];
        p.ensure_grad();
        const double g = self.grad(0, 0);
        for (std::size_t i = 0; i < p.grad.size(); ++i) p.grad[i] += g * w[i];
    });
}

Var detach(const Var& a) { return constant(a->val); }

void backward(const Var& loss) {
    if (loss->val.rows() != 1 || loss->val.cols() != 1)
        throw ContractViolation("backward: loss must be a scalar");

    // Post-order DFS gives children-after-parents; we then walk it in reverse.
    std::vector<Variable*> order;
    std::unordered_set<Variable*> seen;
    std::vector<std::pair<Variable*, std::size_t>> stack;
    stack.emplace_back(loss.get(), 0);
    seen.insert(loss.get());
    while (!stack.empty()) {
        auto& [node, idx] = stack.back();
        if (idx < node->parents.size()) {
            Variable* parent = node->parents[idx].get();
            ++idx;
            if (parent->requires_grad && seen.insert(parent).second)
                stack.emplace_back(parent, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    for (Variable* v : order) {
        v->ensure_grad();
        v->zero_grad();
    }
    loss->grad(0, 0) = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Variable* v = *it;
        if (v->backprop) v->backprop(*v);
    }
}

} // namespace macl::nn
