#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "qif/channel.hpp"

namespace qif {

namespace detail {

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) raise(errc::bad_probability, "p = " + std::to_string(p));
}

}  // namespace detail

/// C1 ∥ C2: both components see the same secret, the adversary sees both
/// outputs. Output set is the product Y1 x Y2 in row-major order.
inline Channel parallel(const Channel& c1, const Channel& c2raw) {
  Channel c2 = c2raw.with_input_order(c1.inputs());
  std::vector<Label> outs;
  outs.reserve(c1.n_outputs() * c2.n_outputs());
  for (const Label& y1 : c1.outputs())
    for (const Label& y2 : c2.outputs()) outs.push_back(Label::pair(y1, y2));
  Matrix m(c1.n_inputs(), outs.size());
  for (size_t x = 0; x < c1.n_inputs(); ++x) {
    size_t j = 0;
    for (size_t y1 = 0; y1 < c1.n_outputs(); ++y1)
      for (size_t y2 = 0; y2 < c2.n_outputs(); ++y2) m(x, j++) = c1.at(x, y1) * c2.at(x, y2);
  }
  return Channel(c1.inputs(), std::move(outs), std::move(m));
}

/// C1 ⊔_p C2: run C1 with probability p, C2 otherwise, and reveal which.
/// Outputs are the disjoint union: Y1 tagged 1, then Y2 tagged 2.
inline Channel visible_choice(const Channel& c1, const Channel& c2raw, double p) {
  detail::check_probability(p);
  Channel c2 = c2raw.with_input_order(c1.inputs());
  std::vector<Label> outs;
  outs.reserve(c1.n_outputs() + c2.n_outputs());
  for (const Label& y : c1.outputs()) outs.push_back(Label::tag(y, 1));
  for (const Label& y : c2.outputs()) outs.push_back(Label::tag(y, 2));
  Matrix m(c1.n_inputs(), outs.size());
  for (size_t x = 0; x < c1.n_inputs(); ++x) {
    for (size_t y = 0; y < c1.n_outputs(); ++y) m(x, y) = p * c1.at(x, y);
    for (size_t y = 0; y < c2.n_outputs(); ++y) m(x, c1.n_outputs() + y) = (1.0 - p) * c2.at(x, y);
  }
  return Channel(c1.inputs(), std::move(outs), std::move(m));
}

/// C1 ⊕_p C2: as visible choice but the branch taken stays hidden, so
/// distributions mix on shared outputs. Output set is the union, keeping
/// Y1's order and appending the labels new to Y2 in Y2's order.
inline Channel hidden_choice(const Channel& c1, const Channel& c2raw, double p) {
  detail::check_probability(p);
  Channel c2 = c2raw.with_input_order(c1.inputs());
  std::vector<Label> outs = c1.outputs();
  std::map<Label, size_t> index;
  for (size_t j = 0; j < outs.size(); ++j) index.emplace(outs[j], j);
  std::vector<size_t> c2col(c2.n_outputs());
  for (size_t y = 0; y < c2.n_outputs(); ++y) {
    auto [it, fresh] = index.emplace(c2.outputs()[y], outs.size());
    if (fresh) outs.push_back(c2.outputs()[y]);
    c2col[y] = it->second;
  }
  Matrix m(c1.n_inputs(), outs.size());
  for (size_t x = 0; x < c1.n_inputs(); ++x) {
    for (size_t y = 0; y < c1.n_outputs(); ++y) m(x, y) += p * c1.at(x, y);
    for (size_t y = 0; y < c2.n_outputs(); ++y) m(x, c2col[y]) += (1.0 - p) * c2.at(x, y);
  }
  return Channel(c1.inputs(), std::move(outs), std::move(m));
}

/// CD: post-process c's outputs through d. c's output labels must equal d's
/// input labels as sets; d's rows are aligned by label before the product.
inline Channel cascade(const Channel& c, const Channel& draw) {
  auto perm = detail::label_permutation(draw.inputs(), c.outputs());
  if (!perm) raise(errc::type_mismatch, "cascade: outputs of first channel do not match inputs of second");
  Matrix dm(draw.n_inputs(), draw.n_outputs());
  for (size_t i = 0; i < perm->size(); ++i)
    for (size_t j = 0; j < draw.n_outputs(); ++j) dm(i, j) = draw.at((*perm)[i], j);
  return Channel(c.inputs(), draw.outputs(), multiply(c.matrix(), dm));
}

/// The channel that leaks nothing: every input row is the same uniform
/// distribution.
inline Channel null_channel(std::vector<Label> inputs, size_t n_outputs) {
  if (n_outputs < 1) raise(errc::dimension_mismatch, "null channel needs at least one output");
  Matrix m(inputs.size(), n_outputs, 1.0 / static_cast<double>(n_outputs));
  return Channel(std::move(inputs), atom_labels("y", n_outputs), std::move(m));
}

inline bool is_null(const Channel& c, double eps = kEqTol) {
  for (size_t x = 1; x < c.n_inputs(); ++x)
    for (size_t y = 0; y < c.n_outputs(); ++y)
      if (std::abs(c.at(x, y) - c.at(0, y)) > eps) return false;
  return true;
}

/// The channel that leaks everything: the identity on the input set.
inline Channel transparent_channel(std::vector<Label> inputs) {
  Matrix m = identity_matrix(inputs.size());
  std::vector<Label> outs = inputs;
  return Channel(std::move(inputs), std::move(outs), std::move(m));
}

inline bool is_transparent(const Channel& c, double eps = kEqTol) {
  for (size_t y = 0; y < c.n_outputs(); ++y) {
    size_t positive = 0;
    for (size_t x = 0; x < c.n_inputs(); ++x)
      if (c.at(x, y) > eps) ++positive;
    if (positive > 1) return false;
  }
  return true;
}

/// Bijection between two output label lists under which the matrices agree
/// entrywise. mapping[k] = (column in c1, column in c2).
struct PermutationWitness {
  std::vector<std::pair<size_t, size_t>> mapping;
};

namespace detail {

inline std::vector<size_t> columns_sorted_lex(const Channel& c) {
  std::vector<size_t> idx(c.n_outputs());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    for (size_t x = 0; x < c.n_inputs(); ++x) {
      if (c.at(x, a) != c.at(x, b)) return c.at(x, a) < c.at(x, b);
    }
    return a < b;
  });
  return idx;
}

inline bool columns_close(const Channel& a, size_t ja, const Channel& b, size_t jb, double eps) {
  for (size_t x = 0; x < a.n_inputs(); ++x)
    if (std::abs(a.at(x, ja) - b.at(x, jb)) > eps) return false;
  return true;
}

}  // namespace detail

/// Decides C1 ≗ C2 (equality up to an output permutation) constructively.
/// Columns are sorted under the lexicographic order and matched; ties among
/// eps-equal columns fall back to a greedy search before giving up.
inline std::optional<PermutationWitness> equal_up_to_permutation(const Channel& c1, const Channel& c2raw,
                                                                 double eps = kEqTol) {
  if (c1.n_outputs() != c2raw.n_outputs()) return std::nullopt;
  auto perm = detail::label_permutation(c2raw.inputs(), c1.inputs());
  if (!perm) return std::nullopt;
  Channel c2 = c2raw.with_input_order(c1.inputs());

  auto s1 = detail::columns_sorted_lex(c1);
  auto s2 = detail::columns_sorted_lex(c2);
  bool sorted_ok = true;
  for (size_t k = 0; k < s1.size(); ++k) {
    if (!detail::columns_close(c1, s1[k], c2, s2[k], eps)) {
      sorted_ok = false;
      break;
    }
  }
  PermutationWitness w;
  if (sorted_ok) {
    w.mapping.resize(s1.size());
    for (size_t k = 0; k < s1.size(); ++k) w.mapping[k] = {s1[k], s2[k]};
    std::sort(w.mapping.begin(), w.mapping.end());
    return w;
  }
  // Near-ties can make the two sorts disagree; match greedily instead.
  std::vector<bool> used(c2.n_outputs(), false);
  for (size_t j1 = 0; j1 < c1.n_outputs(); ++j1) {
    bool found = false;
    for (size_t j2 = 0; j2 < c2.n_outputs(); ++j2) {
      if (used[j2] || !detail::columns_close(c1, j1, c2, j2, eps)) continue;
      used[j2] = true;
      w.mapping.emplace_back(j1, j2);
      found = true;
      break;
    }
    if (!found) return std::nullopt;
  }
  return w;
}

/// Columns reordered under the total order on output labels. Lets laws whose
/// two sides build the same label set in different orders be asserted
/// entrywise.
inline Channel canonical(const Channel& c) {
  std::vector<size_t> idx(c.n_outputs());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return c.outputs()[a] < c.outputs()[b]; });
  std::vector<Label> outs;
  outs.reserve(idx.size());
  Matrix m(c.n_inputs(), c.n_outputs());
  for (size_t k = 0; k < idx.size(); ++k) {
    outs.push_back(c.outputs()[idx[k]]);
    for (size_t x = 0; x < c.n_inputs(); ++x) m(x, k) = c.at(x, idx[k]);
  }
  return Channel(c.inputs(), std::move(outs), std::move(m));
}

/// D^∥ from the cascading law (C1 D1) ∥ (C2 D2) = (C1 ∥ C2) D^∥:
/// D^∥((y1,y2),(z1,z2)) = D1(y1,z1) D2(y2,z2).
inline Channel parallel_post(const Channel& d1, const Channel& d2) {
  std::vector<Label> ins;
  ins.reserve(d1.n_inputs() * d2.n_inputs());
  for (const Label& y1 : d1.inputs())
    for (const Label& y2 : d2.inputs()) ins.push_back(Label::pair(y1, y2));
  std::vector<Label> outs;
  outs.reserve(d1.n_outputs() * d2.n_outputs());
  for (const Label& z1 : d1.outputs())
    for (const Label& z2 : d2.outputs()) outs.push_back(Label::pair(z1, z2));
  Matrix m(ins.size(), outs.size());
  size_t i = 0;
  for (size_t y1 = 0; y1 < d1.n_inputs(); ++y1)
    for (size_t y2 = 0; y2 < d2.n_inputs(); ++y2, ++i) {
      size_t j = 0;
      for (size_t z1 = 0; z1 < d1.n_outputs(); ++z1)
        for (size_t z2 = 0; z2 < d2.n_outputs(); ++z2, ++j) m(i, j) = d1.at(y1, z1) * d2.at(y2, z2);
    }
  return Channel(std::move(ins), std::move(outs), std::move(m));
}

/// D^⊔ from the cascading law (C1 D1) ⊔_p (C2 D2) = (C1 ⊔_p C2) D^⊔: block
/// diagonal over the two tagged branches.
inline Channel choice_post(const Channel& d1, const Channel& d2) {
  std::vector<Label> ins;
  for (const Label& y : d1.inputs()) ins.push_back(Label::tag(y, 1));
  for (const Label& y : d2.inputs()) ins.push_back(Label::tag(y, 2));
  std::vector<Label> outs;
  for (const Label& z : d1.outputs()) outs.push_back(Label::tag(z, 1));
  for (const Label& z : d2.outputs()) outs.push_back(Label::tag(z, 2));
  Matrix m(ins.size(), outs.size());
  for (size_t y = 0; y < d1.n_inputs(); ++y)
    for (size_t z = 0; z < d1.n_outputs(); ++z) m(y, z) = d1.at(y, z);
  for (size_t y = 0; y < d2.n_inputs(); ++y)
    for (size_t z = 0; z < d2.n_outputs(); ++z)
      m(d1.n_inputs() + y, d1.n_outputs() + z) = d2.at(y, z);
  return Channel(std::move(ins), std::move(outs), std::move(m));
}

}  // namespace qif
