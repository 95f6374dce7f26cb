#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "qif/algebra.hpp"
#include "qif/channel.hpp"
#include "qif/measures.hpp"
#include "qif/random.hpp"
#include "qif/simplex.hpp"

namespace qif {

/// Feasibility tolerance for the refinement solver. Coarser than kRowTol
/// because LP residuals accumulate across the witness product.
inline constexpr double kRefineTol = 1e-6;

struct RefinementVerdict {
  bool refined = false;
  /// Post-processing channel D with C1 D = C2, when refined.
  std::optional<Channel> witness;
  /// (pi, g) with V_g[pi,C2] > V_g[pi,C1], when a falsifier found one.
  std::optional<std::pair<Prior, GainFunction>> certificate;
  /// max |(C1 witness - C2)(x,z)| for a returned witness.
  double residual = 0.0;
};

/// Decides C1 ⊑∘ C2, i.e. whether some row-stochastic D satisfies C1 D = C2.
///
/// Encoded as a linear feasibility problem (one equality per matrix cell
/// plus one per row of D) and solved by phase-1 simplex. The verdict is
/// ultimately decided by witness substitution: refined only if the extracted
/// D reproduces C2 within eps_ref.
inline RefinementVerdict refines(const Channel& c1, const Channel& c2raw, double eps_ref = kRefineTol) {
  Channel c2 = c2raw.with_input_order(c1.inputs());
  const size_t n = c1.n_inputs();
  const size_t ny = c1.n_outputs();
  const size_t nz = c2.n_outputs();

  // Variables: D(y,z) row-major. Constraints: C1 D = C2 cellwise, then unit
  // row sums for D.
  const size_t nvars = ny * nz;
  const size_t ncons = n * nz + ny;
  Matrix A(ncons, nvars);
  std::vector<double> b(ncons, 0.0);
  size_t r = 0;
  for (size_t x = 0; x < n; ++x) {
    for (size_t z = 0; z < nz; ++z, ++r) {
      for (size_t y = 0; y < ny; ++y) A(r, y * nz + z) = c1.at(x, y);
      b[r] = c2.at(x, z);
    }
  }
  for (size_t y = 0; y < ny; ++y, ++r) {
    for (size_t z = 0; z < nz; ++z) A(r, y * nz + z) = 1.0;
    b[r] = 1.0;
  }

  PhaseOneResult lp = phase_one_feasible(A, std::move(b));
  if (lp.stalled)
    raise(errc::solver_stall, "refinement LP exceeded " + std::to_string(10 * (nvars + ncons)) +
                                  " iterations");

  RefinementVerdict v;
  if (!lp.feasible) return v;

  // Rebuild D from the basic solution and verify it as a channel.
  Matrix d(ny, nz);
  for (size_t y = 0; y < ny; ++y) {
    double sum = 0.0;
    for (size_t z = 0; z < nz; ++z) {
      double val = lp.x[y * nz + z];
      if (val < 0.0) {
        if (val < -eps_ref) return v;
        val = 0.0;
      }
      d(y, z) = val;
      sum += val;
    }
    if (std::abs(sum - 1.0) > eps_ref) return v;
    for (size_t z = 0; z < nz; ++z) d(y, z) /= sum;
  }
  Matrix product = multiply(c1.matrix(), d);
  double residual = max_abs_diff(product, c2.matrix());
  if (residual > eps_ref) return v;

  v.refined = true;
  v.residual = residual;
  v.witness = Channel(c1.outputs(), c2.outputs(), std::move(d));
  return v;
}

inline bool equivalent(const Channel& c1, const Channel& c2, double eps_ref = kRefineTol) {
  return refines(c1, c2, eps_ref).refined && refines(c2, c1, eps_ref).refined;
}

/// Samples (pi, g) pairs looking for a Coriaceous certificate that C2 leaks
/// strictly more than C1. A hit disproves C1 ⊑∘ C2; a miss proves nothing,
/// refines() stays the decision procedure and this the cross-check.
inline std::optional<std::pair<Prior, GainFunction>> coriaceous_falsify(const Channel& c1,
                                                                        const Channel& c2raw,
                                                                        size_t trials, uint64_t seed) {
  Channel c2 = c2raw.with_input_order(c1.inputs());
  Rng rng(seed);
  const size_t nx = c1.n_inputs();
  std::uniform_int_distribution<size_t> action_count(1, 2 * nx);
  for (size_t t = 0; t < trials; ++t) {
    Prior pi = random_prior(rng, c1.inputs());
    GainFunction g = random_gain(rng, c1.inputs(), action_count(rng));
    double v1 = posterior_vulnerability(pi, c1, g);
    double v2 = posterior_vulnerability(pi, c2, g);
    if (v2 > v1 + 1e-9) return std::make_pair(std::move(pi), std::move(g));
  }
  return std::nullopt;
}

}  // namespace qif
