#pragma once

#include "macl/autograd.hpp"

#include <string>
#include <vector>

namespace macl::nn {

// One trainable tensor plus its optimizer state. Each parameter carries its
// own step counter so parameters that belong to different training stages
// keep independent bias-correction schedules.
struct Parameter {
    std::string name;
    Var node;
    Tensor m; // first moment
    Tensor v; // second moment
    long step_count = 0;
};

struct AdamConfig {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

Parameter make_parameter(std::string name, Var node);

// Applies one Adam update to every parameter whose gradient is populated,
// then clears the gradients. Parameters with no gradient (not touched by the
// last backward pass) are skipped entirely: their moments and step counters
// stay put.
void adam_step(const AdamConfig& cfg, std::vector<Parameter>& params);

} // namespace macl::nn
