#pragma once

#include "macl/autograd.hpp"
#include "macl/rng.hpp"

#include <string>
#include <utility>
#include <vector>

namespace macl::nn {

// Per-node neighbor lists with positive edge weights, compiled from a view.
// Lists are sorted by neighbor id so aggregation order is deterministic.
struct NeighborIndex {
    std::vector<std::vector<std::pair<int, double>>> adj;

    int node_count() const { return static_cast<int>(adj.size()); }
    std::size_t edge_entries() const {
        std::size_t n = 0;
        for (const auto& a : adj) n += a.size();
        return n;
    }
};

// Single-head additive attention layer. Edge weights enter the attention
// logits as an additive ln(w) bias, so all-ones weights reduce to plain GAT.
struct GatLayer {
    std::string name;
    Var W;     // (d_in, d_out)
    Var a_src; // (d_out, 1)
    Var a_dst; // (d_out, 1)
    double leaky_slope = 0.2;
};

GatLayer make_gat_layer(std::string name, int d_in, int d_out, Rng& rng);

// h'_v = ELU( sum_{u in N(v) (+ v)} alpha_vu * W h_u ), with
// logit_vu = LeakyReLU(a_src.(W h_v) + a_dst.(W h_u)) + ln(w_vu), w_vv = 1,
// alpha softmax-normalized over the augmented neighborhood.
// Throws NumericFault naming the layer if the output is not finite.
Var gat_forward(const GatLayer& layer, const Var& feats, const NeighborIndex& index,
                bool include_self = true);

// Forward-only attention coefficients for inspection and tests: one
// (neighbor id, alpha) list per node over its augmented neighborhood,
// self first when included. Alphas of a nonempty neighborhood sum to 1.
std::vector<std::vector<std::pair<int, double>>> gat_attention(const GatLayer& layer,
                                                               const Tensor& feats,
                                                               const NeighborIndex& index,
                                                               bool include_self = true);

// Training: zero each entry with probability p, scale survivors by 1/(1-p).
// Inference: identity.
Var dropout(const Var& x, double p, bool training, Rng& rng);

} // namespace macl::nn
