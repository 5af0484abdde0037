#pragma once

#include <cstddef>
#include <vector>

namespace opsw {

/// Dense square matrix of arc weights, row-major, indexed by node id.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    const std::vector<double>& values() const noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

    bool is_symmetric() const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    /// True when every triple satisfies w(i,k) <= w(i,j) + w(j,k) + tol.
    bool satisfies_triangle_inequality(double tol = 0.0) const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t k = 0; k < n_; ++k)
                    if ((*this)(i, k) > (*this)(i, j) + (*this)(j, k) + tol) return false;
        return true;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

}  // namespace opsw
