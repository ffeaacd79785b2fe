#include "diar/assignment.hpp"

#include <algorithm>
#include <limits>

#include "diar/errors.hpp"

namespace diar {

// Hungarian algorithm (potentials formulation), O(n^3). Solves min-cost on
// cost = max_weight - weight over the square-padded matrix.
std::vector<int> max_weight_assignment(const std::vector<double>& weights, std::size_t rows,
                                       std::size_t cols) {
  if (weights.size() != rows * cols)
    throw ValidationError("assignment: weight matrix size mismatch");
  if (rows == 0 || cols == 0) return std::vector<int>(rows, -1);

  const std::size_t n = std::max(rows, cols);
  double max_w = 0.0;
  for (double w : weights) max_w = std::max(max_w, w);

  auto cost = [&](std::size_t r, std::size_t c) -> double {
    if (r < rows && c < cols) return max_w - weights[r * cols + c];
    return max_w;  // padding behaves like a zero-weight pairing
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = match[j0], j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> result(rows, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    std::size_t r = match[j];
    if (r == 0 || r - 1 >= rows || j - 1 >= cols) continue;
    if (weights[(r - 1) * cols + (j - 1)] > 0.0) result[r - 1] = static_cast<int>(j - 1);
  }
  return result;
}

}  // namespace diar
