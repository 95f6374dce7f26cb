#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "qif/qif.hpp"

namespace qt {

using namespace qif;

/// Example channel used throughout: 3 secrets, 4 observations.
inline Channel example1() {
  return Channel::from_rows(atom_labels("x", 3), atom_labels("y", 4),
                            {{1.0 / 6, 2.0 / 3, 1.0 / 6, 0.0},
                             {0.5, 0.25, 0.25, 0.0},
                             {0.5, 1.0 / 3, 0.0, 1.0 / 6}});
}

inline Prior example1_prior() { return Prior(atom_labels("x", 3), {0.5, 1.0 / 3, 1.0 / 6}); }

/// Footnote counterexample pair: V(C2) <= V(C1) yet C2 ∥ C1 out-leaks
/// C1 ∥ C1.
inline Channel footnote_c1() {
  return Channel::from_rows(atom_labels("x", 3), atom_labels("y", 2), {{1, 0}, {1, 0}, {0, 1}});
}

inline Channel footnote_c2() {
  return Channel::from_rows(atom_labels("x", 3), atom_labels("y", 2), {{1, 0}, {0, 1}, {0, 1}});
}

/// Largest |a - b| over matching (input, output) label pairs; infinity when
/// the label sets differ. Lets laws whose sides order labels differently be
/// compared entrywise.
inline double max_diff_by_label(const Channel& a, const Channel& b) {
  auto inf = std::numeric_limits<double>::infinity();
  if (a.n_inputs() != b.n_inputs() || a.n_outputs() != b.n_outputs()) return inf;
  auto perm = qif::detail::label_permutation(b.inputs(), a.inputs());
  if (!perm) return inf;
  std::map<Label, size_t> bcol;
  for (size_t j = 0; j < b.n_outputs(); ++j) bcol.emplace(b.outputs()[j], j);
  if (bcol.size() != b.n_outputs()) return inf;
  double worst = 0.0;
  for (size_t j = 0; j < a.n_outputs(); ++j) {
    auto it = bcol.find(a.outputs()[j]);
    if (it == bcol.end()) return inf;
    for (size_t x = 0; x < a.n_inputs(); ++x) {
      double d = std::abs(a.at(x, j) - b.at((*perm)[x], it->second));
      if (d > worst) worst = d;
    }
  }
  return worst;
}

inline bool entrywise_equal(const Channel& a, const Channel& b, double eps = kEqTol) {
  return max_diff_by_label(a, b) <= eps;
}

/// Random compatible triple over a shared input set, dims <= 6x6. Output
/// prefixes are mixed so hidden-choice unions see both overlapping and
/// disjoint label sets.
struct RandomTriple {
  Channel c1, c2, c3;
  double p, q;
};

inline RandomTriple random_triple(Rng& rng) {
  std::uniform_int_distribution<size_t> dim(2, 6);
  std::uniform_real_distribution<double> prob(0.05, 0.95);
  std::uniform_int_distribution<int> pick(0, 1);
  auto xs = atom_labels("x", dim(rng));
  size_t k = dim(rng);
  Channel c1 = random_channel(rng, xs, k, "y");
  Channel c2 = random_channel(rng, xs, dim(rng), pick(rng) ? "y" : "z");
  Channel c3 = random_channel(rng, xs, dim(rng), pick(rng) ? "y" : "w");
  return RandomTriple{std::move(c1), std::move(c2), std::move(c3), prob(rng), prob(rng)};
}

}  // namespace qt
