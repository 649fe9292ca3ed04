#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace riskfs {

// Dense row-major matrix of doubles. Rows are observations, columns features.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), cells_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return {cells_.data() + r * cols_, cols_};
    }
    std::span<double> row(std::size_t r) {
        return {cells_.data() + r * cols_, cols_};
    }

    const std::vector<double>& cells() const { return cells_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> cells_;
};

} // namespace riskfs
