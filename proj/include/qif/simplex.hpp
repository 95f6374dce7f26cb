#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "qif/matrix.hpp"

namespace qif {

/// Outcome of a phase-1 feasibility run for {x >= 0 : Ax = b}.
///
/// `objective` is the minimized sum of artificial variables, i.e. the
/// residual l1-norm; feasible means it reached (numerical) zero. `stalled`
/// reports an exceeded iteration cap and leaves feasibility undecided.
struct PhaseOneResult {
  bool feasible = false;
  bool stalled = false;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Dense tableau phase-1 simplex for small feasibility problems.
///
/// Pricing is Dantzig's rule while it makes progress and Bland's rule once
/// the pivot count passes n+m, so termination does not rest on luck. The
/// ratio test takes the strict minimum with a tiny relative tie window;
/// near-zero right-hand sides are clamped and the objective row is rebuilt
/// from the basis every so often, which keeps thousands of degenerate
/// pivots from corroding the tableau. The iteration cap (default 10*(n+m))
/// turns a pathological run into an explicit stall instead of a wrong
/// verdict.
inline PhaseOneResult phase_one_feasible(const Matrix& A, std::vector<double> b,
                                         double feas_tol = 1e-9, std::size_t max_iterations = 0) {
  const std::size_t m = A.rows;
  const std::size_t n = A.cols;
  if (max_iterations == 0) max_iterations = 10 * (n + m);
  const std::size_t bland_after = n + m;
  const double cost_tol = 1e-9;
  const double pivot_tol = 1e-9;

  // Tableau columns: n structural, m artificial, rhs. Flip rows so b >= 0.
  Matrix t(m + 1, n + m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t(i, j) = sign * A(i, j);
    t(i, n + i) = 1.0;
    t(i, n + m) = sign * b[i];
  }

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // Objective row holds z_j - c_j for the minimization of the artificial
  // sum; rebuilt from scratch here and periodically below. Only rows whose
  // basic variable is artificial contribute (their c_B is 1).
  auto rebuild_objective = [&]() {
    for (std::size_t j = 0; j <= n + m; ++j) t(m, j) = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n) continue;
      for (std::size_t j = 0; j <= n + m; ++j) t(m, j) += t(i, j);
    }
    for (std::size_t j = n; j < n + m; ++j) t(m, j) -= 1.0;
    for (std::size_t i = 0; i < m; ++i) t(m, basis[i]) = 0.0;
  };
  rebuild_objective();

  PhaseOneResult res;
  while (true) {
    if (res.iterations % 128 == 127) rebuild_objective();
    const bool bland = res.iterations >= bland_after;

    std::size_t enter = n + m;
    if (bland) {
      for (std::size_t j = 0; j < n + m; ++j) {
        if (t(m, j) > cost_tol) {
          enter = j;
          break;
        }
      }
    } else {
      double best = cost_tol;
      for (std::size_t j = 0; j < n + m; ++j) {
        if (t(m, j) > best) {
          best = t(m, j);
          enter = j;
        }
      }
    }
    if (enter == n + m) break;  // optimal

    // Ratio test, two passes: strict minimum first, then tie-break inside a
    // tiny relative window.
    double min_ratio = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t(i, enter) <= pivot_tol) continue;
      double ratio = t(i, n + m) / t(i, enter);
      if (min_ratio < 0.0 || ratio < min_ratio) min_ratio = ratio;
    }
    if (min_ratio < 0.0) break;  // unbounded cannot happen in phase 1

    const double tie_window = min_ratio * 1e-9 + 1e-13;
    std::size_t leave = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (t(i, enter) <= pivot_tol) continue;
      double ratio = t(i, n + m) / t(i, enter);
      if (ratio > min_ratio + tie_window) continue;
      if (leave == m) {
        leave = i;
      } else if (bland) {
        if (basis[i] < basis[leave]) leave = i;
      } else {
        if (t(i, enter) > t(leave, enter)) leave = i;
      }
    }

    if (++res.iterations > max_iterations) {
      res.stalled = true;
      break;
    }

    double piv = t(leave, enter);
    for (std::size_t j = 0; j <= n + m; ++j) t(leave, j) /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = t(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n + m; ++j) t(i, j) -= f * t(leave, j);
      t(i, enter) = 0.0;
    }
    basis[leave] = enter;

    // degenerate pivots leave dust in the rhs; keep it non-negative
    for (std::size_t i = 0; i < m; ++i)
      if (t(i, n + m) < 0.0 && t(i, n + m) > -1e-9) t(i, n + m) = 0.0;
  }

  // The exact residual at the final basis, independent of objective-row
  // drift: sum of the artificial basic values.
  res.objective = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] >= n) res.objective += std::abs(t(i, n + m));
  res.feasible = !res.stalled && res.objective <= feas_tol * static_cast<double>(m + 1);
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = t(i, n + m);
  return res;
}

}  // namespace qif
