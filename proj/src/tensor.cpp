#include "macl/tensor.hpp"

#include "macl/errors.hpp"

#include <cmath>

namespace macl {

bool Tensor::all_finite() const {
    for (double x : v_) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

double Tensor::item() const {
    if (rows_ != 1 || cols_ != 1) throw ContractViolation("item() requires a 1x1 tensor");
    return v_[0];
}

} // namespace macl
