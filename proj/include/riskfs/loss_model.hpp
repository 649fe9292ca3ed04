#pragma once

#include <istream>
#include <span>

#include "riskfs/dataset.hpp"
#include "riskfs/matrix.hpp"

namespace riskfs {

// n x n misclassification penalties; values(i, j) is the loss of predicting
// class i when the truth is class j. Diagonal is zero, entries nonnegative.
struct LossMatrix {
    Matrix values;

    std::size_t size() const { return values.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return values(i, j); }
};

// Default rule: 2 * [type differs] + [brand differs], so entries fall in
// {0,1,2,3} and the matrix is symmetric. String comparison uses the same
// trim+lowercase normalization as device loading.
LossMatrix build_default_loss(std::span<const DeviceLabel> devices);

// loss.csv: first row and first column carry device label strings, cell
// (i, j) = loss of predicting device i when truth is j. Rows/columns may be
// in any order; entries are validated (zero diagonal, nonnegative, complete).
// Custom matrices may be asymmetric.
LossMatrix load_loss(std::istream& loss_source, std::span<const DeviceLabel> devices);

} // namespace riskfs
