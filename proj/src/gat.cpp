#include "macl/gat.hpp"

#include "macl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace macl::nn {

namespace {

Tensor glorot_uniform(int rows, int cols, Rng& rng) {
    Tensor t(rows, cols);
    const double bound = std::sqrt(6.0 / (rows + cols));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
    return t;
}

// Attention coefficients and the LeakyReLU slopes seen at each logit. Split
// out from the aggregation so backward replays the same bookkeeping.
struct NodeAttention {
    std::vector<int> nbr;        // augmented neighborhood (self first if included)
    std::vector<double> alpha;   // softmax weights
    std::vector<double> dlrelu;  // LeakyReLU'(s_v + t_u)
};

std::vector<NodeAttention> compute_attention(const Tensor& s, const Tensor& t,
                                             const NeighborIndex& index, bool include_self,
                                             double slope) {
    const int n = index.node_count();
    std::vector<NodeAttention> attention(n);
    for (int v = 0; v < n; ++v) {
        NodeAttention& at = attention[v];
        if (include_self) at.nbr.push_back(v);
        for (const auto& [u, w] : index.adj[v]) {
            (void)w;
            at.nbr.push_back(u);
        }
        if (at.nbr.empty()) continue; // no self-loop requested and no neighbors

        const std::size_t k = at.nbr.size();
        std::vector<double> logits(k);
        at.dlrelu.resize(k);
        const double sv = s(v, 0);
        for (std::size_t j = 0; j < k; ++j) {
            const int u = at.nbr[j];
            const double x = sv + t(u, 0);
            const double lr = x > 0.0 ? x : slope * x;
            at.dlrelu[j] = x > 0.0 ? 1.0 : slope;
            double lnw = 0.0; // self weight is 1
            if (!(include_self && j == 0))
                lnw = std::log(index.adj[v][include_self ? j - 1 : j].second);
            logits[j] = lr + lnw;
        }
        const double mx = *std::max_element(logits.begin(), logits.end());
        double z = 0.0;
        at.alpha.resize(k);
        for (std::size_t j = 0; j < k; ++j) {
            at.alpha[j] = std::exp(logits[j] - mx);
            z += at.alpha[j];
        }
        for (std::size_t j = 0; j < k; ++j) at.alpha[j] /= z;
    }
    return attention;
}

} // namespace

GatLayer make_gat_layer(std::string name, int d_in, int d_out, Rng& rng) {
    GatLayer layer;
    layer.name = std::move(name);
    layer.W = leaf(glorot_uniform(d_in, d_out, rng));
    layer.a_src = leaf(glorot_uniform(d_out, 1, rng));
    layer.a_dst = leaf(glorot_uniform(d_out, 1, rng));
    return layer;
}

Var gat_forward(const GatLayer& layer, const Var& feats, const NeighborIndex& index,
                bool include_self) {
    const int n = feats->val.rows();
    if (n != index.node_count())
        throw ContractViolation("gat_forward: feature rows != index node count");

    Var proj = matmul(feats, layer.W);         // (n, d_out)
    Var s = matmul(proj, layer.a_src);         // (n, 1)
    Var t = matmul(proj, layer.a_dst);         // (n, 1)
    const int d = proj->val.cols();

    auto attention = std::make_shared<std::vector<NodeAttention>>(
        compute_attention(s->val, t->val, index, include_self, layer.leaky_slope));

    Tensor out(n, d);
    for (int v = 0; v < n; ++v) {
        const NodeAttention& at = (*attention)[v];
        double* ov = out.row(v);
        for (std::size_t j = 0; j < at.nbr.size(); ++j) {
            const double* pu = proj->val.row(at.nbr[j]);
            for (int c = 0; c < d; ++c) ov[c] += at.alpha[j] * pu[c];
        }
    }

    auto agg = [attention, n, d](Variable& self) {
        Variable& proj_p = *self.parents[0];
        Variable& s_p = *self.parents[1];
        Variable& t_p = *self.parents[2];
        proj_p.ensure_grad();
        s_p.ensure_grad();
        t_p.ensure_grad();
        for (int v = 0; v < n; ++v) {
            const NodeAttention& at = (*attention)[v];
            const std::size_t k = at.nbr.size();
            if (k == 0) continue;
            const double* gv = self.grad.row(v);
            // q_j = g_v . P_uj; softmax backward turns (q - qbar) into logit grads.
            std::vector<double> q(k);
            double qbar = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                const double* pu = proj_p.val.row(at.nbr[j]);
                double acc = 0.0;
                for (int c = 0; c < d; ++c) acc += gv[c] * pu[c];
                q[j] = acc;
                qbar += at.alpha[j] * acc;
            }
            for (std::size_t j = 0; j < k; ++j) {
                const int u = at.nbr[j];
                double* dpu = proj_p.grad.row(u);
                for (int c = 0; c < d; ++c) dpu[c] += at.alpha[j] * gv[c];
                const double de = at.alpha[j] * (q[j] - qbar); // dL/dlogit_j
                const double dx = de * at.dlrelu[j];
                s_p.grad(v, 0) += dx;
                t_p.grad(u, 0) += dx;
            }
        }
    };

    auto node = std::make_shared<Variable>();
    node->val = std::move(out);
    node->parents = {proj, s, t};
    node->requires_grad = proj->requires_grad || s->requires_grad || t->requires_grad;
    if (node->requires_grad) node->backprop = agg;

    Var activated = elu(node);
    if (!activated->val.all_finite())
        throw NumericFault("non-finite activation in gat layer " + layer.name);
    return activated;
}

std::vector<std::vector<std::pair<int, double>>> gat_attention(const GatLayer& layer,
                                                               const Tensor& feats,
                                                               const NeighborIndex& index,
                                                               bool include_self) {
    Var f = constant(feats);
    Var proj = matmul(f, layer.W);
    Var s = matmul(proj, layer.a_src);
    Var t = matmul(proj, layer.a_dst);
    auto attention =
        compute_attention(s->val, t->val, index, include_self, layer.leaky_slope);
    std::vector<std::vector<std::pair<int, double>>> out(attention.size());
    for (std::size_t v = 0; v < attention.size(); ++v)
        for (std::size_t j = 0; j < attention[v].nbr.size(); ++j)
            out[v].emplace_back(attention[v].nbr[j], attention[v].alpha[j]);
    return out;
}

Var dropout(const Var& x, double p, bool training, Rng& rng) {
    if (p < 0.0 || p >= 1.0) throw ContractViolation("dropout: p must be in [0, 1)");
    if (!training || p == 0.0) return x;
    Tensor mask(x->val.rows(), x->val.cols());
    const double keep_scale = 1.0 / (1.0 - p);
    for (std::size_t i = 0; i < mask.size(); ++i)
        mask[i] = rng.bernoulli(p) ? 0.0 : keep_scale;
    return mul_mask(x, mask);
}

} // namespace macl::nn
