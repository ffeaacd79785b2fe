#pragma once

#include <cstddef>
#include <vector>

namespace diar {

// Exact maximum-weight one-to-one assignment between rows and columns of a
// (possibly rectangular) non-negative weight matrix, Hungarian algorithm.
//
// weights is row-major, size rows x cols. Returns one column index per row,
// or -1 when the row is left unmatched (more rows than columns, or every
// available pairing has zero weight). Zero-weight pairings are never reported
// as matches.
std::vector<int> max_weight_assignment(const std::vector<double>& weights, std::size_t rows,
                                       std::size_t cols);

}  // namespace diar
