#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qif/error.hpp"
#include "qif/label.hpp"
#include "qif/matrix.hpp"

namespace qif {

/// Absolute tolerance for stochasticity checks. Rows must sum to 1 within
/// this bound; compliant rows are renormalized, anything further off is
/// rejected.
inline constexpr double kRowTol = 1e-9;

/// Absolute tolerance for entrywise channel comparisons and the
/// null/transparent predicates.
inline constexpr double kEqTol = 1e-9;

namespace detail {

inline void check_no_duplicates(const std::vector<Label>& labels, const char* what) {
  std::map<Label, size_t> seen;
  for (size_t i = 0; i < labels.size(); ++i) {
    auto [it, fresh] = seen.emplace(labels[i], i);
    if (!fresh)
      raise(errc::duplicate_label, std::string(what) + " label '" + labels[i].str() + "' appears twice");
  }
}

// Index of each label of `order` inside `labels`; nullopt unless the two
// lists hold exactly the same label set.
inline std::optional<std::vector<size_t>> label_permutation(const std::vector<Label>& labels,
                                                            const std::vector<Label>& order) {
  if (labels.size() != order.size()) return std::nullopt;
  std::map<Label, size_t> index;
  for (size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
  if (index.size() != labels.size()) return std::nullopt;
  std::vector<size_t> perm(order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    auto it = index.find(order[i]);
    if (it == index.end()) return std::nullopt;
    perm[i] = it->second;
  }
  return perm;
}

}  // namespace detail

/// Labeled row-stochastic matrix: C(x,y) = p(y|x).
///
/// Construction validates every invariant (label uniqueness, entry range,
/// row sums within kRowTol) and renormalizes rows, so a Channel value is
/// well-formed by construction. Immutable afterwards.
class Channel {
 public:
  Channel(std::vector<Label> inputs, std::vector<Label> outputs, Matrix m)
      : inputs_(std::move(inputs)), outputs_(std::move(outputs)), m_(std::move(m)) {
    if (m_.rows != inputs_.size() || m_.cols != outputs_.size())
      raise(errc::dimension_mismatch, "matrix is " + std::to_string(m_.rows) + "x" +
                                          std::to_string(m_.cols) + " but labels say " +
                                          std::to_string(inputs_.size()) + "x" +
                                          std::to_string(outputs_.size()));
    if (inputs_.empty() || outputs_.empty())
      raise(errc::dimension_mismatch, "channel needs at least one input and one output");
    detail::check_no_duplicates(inputs_, "input");
    detail::check_no_duplicates(outputs_, "output");
    for (size_t i = 0; i < m_.rows; ++i) {
      double sum = 0.0;
      for (size_t j = 0; j < m_.cols; ++j) {
        double v = m_(i, j);
        if (v < -kRowTol)
          raise(errc::negative_entry, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                          ") = " + std::to_string(v));
        sum += v;
      }
      if (std::abs(sum - 1.0) > kRowTol)
        raise(errc::row_sum, "row " + std::to_string(i) + " sums to " + std::to_string(sum));
      for (size_t j = 0; j < m_.cols; ++j) {
        double v = m_(i, j) / sum;
        m_(i, j) = v < 0.0 ? 0.0 : v;
      }
    }
  }

  static Channel from_rows(std::vector<Label> inputs, std::vector<Label> outputs,
                           const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols)
        raise(errc::dimension_mismatch, "ragged row " + std::to_string(i));
      for (size_t j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    }
    return Channel(std::move(inputs), std::move(outputs), std::move(m));
  }

  const std::vector<Label>& inputs() const { return inputs_; }
  const std::vector<Label>& outputs() const { return outputs_; }
  size_t n_inputs() const { return inputs_.size(); }
  size_t n_outputs() const { return outputs_.size(); }
  double at(size_t x, size_t y) const { return m_(x, y); }
  const Matrix& matrix() const { return m_; }

  std::optional<size_t> output_index(const Label& l) const {
    for (size_t j = 0; j < outputs_.size(); ++j)
      if (outputs_[j] == l) return j;
    return std::nullopt;
  }

  /// Same channel with rows rearranged to the given input order. Label
  /// matching is by value; order is layout, not semantics.
  Channel with_input_order(const std::vector<Label>& order) const {
    auto perm = detail::label_permutation(inputs_, order);
    if (!perm) raise(errc::incompatible_inputs, "input label sets differ");
    Matrix m(m_.rows, m_.cols);
    for (size_t i = 0; i < order.size(); ++i)
      for (size_t j = 0; j < m_.cols; ++j) m(i, j) = m_((*perm)[i], j);
    return Channel(order, outputs_, std::move(m));
  }

 private:
  std::vector<Label> inputs_;
  std::vector<Label> outputs_;
  Matrix m_;
};

/// Probability distribution over a label set.
class Prior {
 public:
  Prior(std::vector<Label> support, std::vector<double> probs)
      : support_(std::move(support)), probs_(std::move(probs)) {
    if (support_.size() != probs_.size())
      raise(errc::dimension_mismatch, "prior has " + std::to_string(support_.size()) +
                                          " labels but " + std::to_string(probs_.size()) + " entries");
    if (support_.empty()) raise(errc::dimension_mismatch, "prior needs at least one entry");
    detail::check_no_duplicates(support_, "prior");
    double sum = 0.0;
    for (double v : probs_) {
      if (v < -kRowTol) raise(errc::negative_entry, "negative prior entry " + std::to_string(v));
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowTol)
      raise(errc::row_sum, "prior sums to " + std::to_string(sum));
    for (double& v : probs_) {
      v /= sum;
      if (v < 0.0) v = 0.0;
    }
  }

  static Prior uniform(std::vector<Label> support) {
    std::vector<double> p(support.size(), 1.0 / static_cast<double>(support.size()));
    return Prior(std::move(support), std::move(p));
  }

  const std::vector<Label>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }
  size_t size() const { return support_.size(); }
  double at(size_t i) const { return probs_[i]; }

  Prior with_support_order(const std::vector<Label>& order) const {
    auto perm = detail::label_permutation(support_, order);
    if (!perm) raise(errc::label_mismatch, "prior support does not match");
    std::vector<double> p(order.size());
    for (size_t i = 0; i < order.size(); ++i) p[i] = probs_[(*perm)[i]];
    return Prior(order, std::move(p));
  }

 private:
  std::vector<Label> support_;
  std::vector<double> probs_;
};

/// Adversary payoff matrix g(w,x) in [0,1] over a finite action set.
class GainFunction {
 public:
  GainFunction(std::vector<Label> actions, std::vector<Label> inputs, Matrix m)
      : actions_(std::move(actions)), inputs_(std::move(inputs)), m_(std::move(m)) {
    if (actions_.empty()) raise(errc::dimension_mismatch, "gain function needs at least one action");
    if (m_.rows != actions_.size() || m_.cols != inputs_.size())
      raise(errc::dimension_mismatch, "gain matrix shape does not match label lists");
    detail::check_no_duplicates(actions_, "action");
    detail::check_no_duplicates(inputs_, "input");
    for (double& v : m_.data) {
      if (v < -kRowTol || v > 1.0 + kRowTol)
        raise(errc::negative_entry, "gain entry " + std::to_string(v) + " outside [0,1]");
      if (v < 0.0) v = 0.0;
      if (v > 1.0) v = 1.0;
    }
  }

  static GainFunction from_rows(std::vector<Label> actions, std::vector<Label> inputs,
                                const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols) raise(errc::dimension_mismatch, "ragged gain row");
      for (size_t j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    }
    return GainFunction(std::move(actions), std::move(inputs), std::move(m));
  }

  const std::vector<Label>& actions() const { return actions_; }
  const std::vector<Label>& inputs() const { return inputs_; }
  size_t n_actions() const { return actions_.size(); }
  double at(size_t w, size_t x) const { return m_(w, x); }

  GainFunction with_input_order(const std::vector<Label>& order) const {
    auto perm = detail::label_permutation(inputs_, order);
    if (!perm) raise(errc::label_mismatch, "gain inputs do not match");
    Matrix m(m_.rows, m_.cols);
    for (size_t w = 0; w < m_.rows; ++w)
      for (size_t i = 0; i < order.size(); ++i) m(w, i) = m_(w, (*perm)[i]);
    return GainFunction(actions_, order, std::move(m));
  }

 private:
  std::vector<Label> actions_;
  std::vector<Label> inputs_;
  Matrix m_;
};

/// p(x,y) = pi(x) C(x,y). The prior must cover exactly the channel's inputs.
inline Matrix joint_distribution(const Channel& c, const Prior& pi) {
  Prior aligned = pi.with_support_order(c.inputs());
  Matrix j(c.n_inputs(), c.n_outputs());
  for (size_t x = 0; x < c.n_inputs(); ++x)
    for (size_t y = 0; y < c.n_outputs(); ++y) j(x, y) = aligned.at(x) * c.at(x, y);
  return j;
}

struct PosteriorDecomposition {
  std::vector<double> marginals;    // p(y) for outputs with p(y) > 0
  std::vector<Prior> posteriors;    // p_{X|y}, same order as marginals
  std::vector<Label> outputs;       // the outputs kept
  std::vector<Label> zero_outputs;  // outputs skipped because p(y) = 0
};

/// Output marginals and posterior distributions. Outputs with zero marginal
/// have no posterior; they are listed separately instead of raising.
inline PosteriorDecomposition posteriors(const Channel& c, const Prior& pi) {
  Matrix j = joint_distribution(c, pi);
  PosteriorDecomposition out;
  for (size_t y = 0; y < c.n_outputs(); ++y) {
    double py = 0.0;
    for (size_t x = 0; x < c.n_inputs(); ++x) py += j(x, y);
    if (py <= 0.0) {
      out.zero_outputs.push_back(c.outputs()[y]);
      continue;
    }
    std::vector<double> col(c.n_inputs());
    for (size_t x = 0; x < c.n_inputs(); ++x) col[x] = j(x, y) / py;
    out.marginals.push_back(py);
    out.posteriors.emplace_back(c.inputs(), std::move(col));
    out.outputs.push_back(c.outputs()[y]);
  }
  return out;
}

inline bool is_row_stochastic(const Channel& c, double eps = kRowTol) {
  for (size_t x = 0; x < c.n_inputs(); ++x) {
    double sum = 0.0;
    for (size_t y = 0; y < c.n_outputs(); ++y) {
      if (c.at(x, y) < -eps) return false;
      sum += c.at(x, y);
    }
    if (std::abs(sum - 1.0) > eps) return false;
  }
  return true;
}

}  // namespace qif
