// Dense low-rank tensor containers and Eigen aliases used across modules.
//
// Spacetime dimension is small (<= 4), so flat row-major storage with inline
// index arithmetic is both simple and fast.  Eigen handles all rank-1/2
// objects; these containers only cover rank 3 (connection) and rank 4
// (curvature).
#pragma once

#include <cassert>
#include <vector>

#include <Eigen/Dense>

namespace pmcf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(int dim) : dim_(dim), v_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

    int dim() const { return dim_; }
    double& operator()(int a, int b, int c) { return v_[idx(a, b, c)]; }
    double operator()(int a, int b, int c) const { return v_[idx(a, b, c)]; }
    void setZero() { std::fill(v_.begin(), v_.end(), 0.0); }
    double max_abs() const {
        double m = 0.0;
        for (double x : v_) m = std::max(m, std::abs(x));
        return m;
    }

private:
    std::size_t idx(int a, int b, int c) const {
        assert(a >= 0 && a < dim_ && b >= 0 && b < dim_ && c >= 0 && c < dim_);
        return (static_cast<std::size_t>(a) * dim_ + b) * dim_ + c;
    }
    int dim_ = 0;
    std::vector<double> v_;
};

class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(int dim)
        : dim_(dim), v_(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}

    int dim() const { return dim_; }
    double& operator()(int a, int b, int c, int d) { return v_[idx(a, b, c, d)]; }
    double operator()(int a, int b, int c, int d) const { return v_[idx(a, b, c, d)]; }
    void setZero() { std::fill(v_.begin(), v_.end(), 0.0); }
    double max_abs() const {
        double m = 0.0;
        for (double x : v_) m = std::max(m, std::abs(x));
        return m;
    }

private:
    std::size_t idx(int a, int b, int c, int d) const {
        assert(a >= 0 && a < dim_ && b >= 0 && b < dim_ && c >= 0 && c < dim_);
        assert(d >= 0 && d < dim_);
        return ((static_cast<std::size_t>(a) * dim_ + b) * dim_ + c) * dim_ + d;
    }
    int dim_ = 0;
    std::vector<double> v_;
};

} // namespace pmcf
