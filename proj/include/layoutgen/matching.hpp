#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

namespace layoutgen {

template <typename Scalar>
struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (row, col), ascending by row
  Scalar total = Scalar(0);

  std::size_t size() const { return pairs.size(); }
};

namespace detail {

/// Dense O(n^3) shortest-augmenting-path assignment on a square cost matrix
/// (min cost). Returns row -> col plus feasible dual potentials with
/// cost(i,j) - row_pot[i] - col_pot[j] >= 0, tight on the assignment.
template <typename Scalar>
struct Assignment {
  std::vector<int> col_of_row;
  std::vector<Scalar> row_pot;
  std::vector<Scalar> col_pot;
};

template <typename Scalar>
Assignment<Scalar> solve_assignment(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& cost) {
  const int n = static_cast<int>(cost.rows());
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  std::vector<Scalar> u(n + 1, Scalar(0)), v(n + 1, Scalar(0));
  std::vector<int> p(n + 1, 0), way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<Scalar> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      Scalar delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Scalar cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment<Scalar> out;
  out.col_of_row.assign(n, -1);
  out.row_pot.assign(n, Scalar(0));
  out.col_pot.assign(n, Scalar(0));
  for (int j = 1; j <= n; ++j) {
    if (p[j] != 0) out.col_of_row[p[j] - 1] = j - 1;
  }
  for (int i = 0; i < n; ++i) out.row_pot[i] = u[i + 1];
  for (int j = 0; j < n; ++j) out.col_pot[j] = v[j + 1];
  return out;
}

}  // namespace detail

/// Maximum-weight bipartite matching of size min(rows, cols).
///
/// Among all optimal matchings the one returned is lexicographically smallest
/// as a row-sorted list of (row, col) pairs. The canonical choice is reached
/// from any optimum by swapping along alternating cycles of tight edges, so
/// the optimum value is never disturbed.
template <typename Derived>
Matching<typename Derived::Scalar> hungarian_max_matching(
    const Eigen::MatrixBase<Derived>& weights) {
  using Scalar = typename Derived::Scalar;
  static_assert(std::is_floating_point_v<Scalar>,
                "matching weights must be floating point");
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matching<Scalar> result;
  const int rows = static_cast<int>(weights.rows());
  const int cols = static_cast<int>(weights.cols());
  if (rows == 0 || cols == 0) return result;

  const int n = std::max(rows, cols);
  Mat cost = Mat::Zero(n, n);
  cost.topLeftCorner(rows, cols) = -weights.derived().template cast<Scalar>();

  auto sol = detail::solve_assignment<Scalar>(cost);
  std::vector<int>& col_of = sol.col_of_row;
  std::vector<int> row_of(n, -1);
  for (int i = 0; i < n; ++i) row_of[col_of[i]] = i;

  const Scalar scale = std::max(Scalar(1), cost.cwiseAbs().maxCoeff());
  const Scalar tol = std::numeric_limits<Scalar>::epsilon() * Scalar(64) *
                     static_cast<Scalar>(n) * scale;
  auto tight = [&](int i, int j) {
    return cost(i, j) - sol.row_pot[i] - sol.col_pot[j] <= tol;
  };
  // Real columns first (ascending), padding columns rank last.
  auto preferred = [&](int c, int cur) {
    const bool c_real = c < cols;
    const bool cur_real = cur < cols;
    if (c_real != cur_real) return c_real;
    return c_real && c < cur;
  };

  std::vector<char> fixed(n, 0);
  std::vector<int> next(n, -1);
  std::vector<int> queue;
  for (int r = 0; r < rows; ++r) {
    // Rows that can hand their column along a tight alternating chain to r.
    std::fill(next.begin(), next.end(), -1);
    queue.assign(1, r);
    next[r] = r;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int k = queue[q];
      const int target_col = col_of[k];
      for (int i = 0; i < n; ++i) {
        if (fixed[i] || next[i] != -1) continue;
        if (tight(i, target_col)) {
          next[i] = k;
          queue.push_back(i);
        }
      }
    }
    int best = col_of[r];
    for (int c = 0; c < n; ++c) {
      const int owner = row_of[c];
      if (c == col_of[r] || fixed[owner] || !preferred(c, best)) continue;
      if (tight(r, c) && next[owner] != -1) best = c;
    }
    if (best != col_of[r]) {
      // Rotate along owner -> ... -> r, then r takes `best`.
      std::vector<std::pair<int, int>> moves;
      for (int i = row_of[best]; i != r; i = next[i]) {
        moves.emplace_back(i, col_of[next[i]]);
      }
      moves.emplace_back(r, best);
      for (auto [i, c] : moves) {
        col_of[i] = c;
        row_of[c] = i;
      }
    }
    fixed[r] = 1;
  }

  for (int r = 0; r < rows; ++r) {
    const int c = col_of[r];
    if (c < cols) {
      result.pairs.emplace_back(r, c);
      result.total += weights(r, c);
    }
  }
  return result;
}

}  // namespace layoutgen
