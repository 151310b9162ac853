#pragma once

#include <cstddef>
#include <vector>

namespace macl {

// Dense row-major matrix of doubles. Vectors are 1xN or Nx1 tensors.
class Tensor {
public:
    Tensor() = default;
    Tensor(int rows, int cols) : rows_(rows), cols_(cols), v_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    static Tensor scalar(double x) {
        Tensor t(1, 1);
        t(0, 0) = x;
        return t;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return v_.size(); }
    bool same_shape(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    double& operator()(int r, int c) { return v_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return v_[static_cast<std::size_t>(r) * cols_ + c]; }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }

    double* row(int r) { return v_.data() + static_cast<std::size_t>(r) * cols_; }
    const double* row(int r) const { return v_.data() + static_cast<std::size_t>(r) * cols_; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

    void fill(double x) { v_.assign(v_.size(), x); }
    void zero() { fill(0.0); }

    bool all_finite() const;
    double item() const; // value of a 1x1 tensor; ContractViolation otherwise

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> v_;
};

} // namespace macl
