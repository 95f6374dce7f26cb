#pragma once

#include <cmath>
#include <optional>

#include "qif/channel.hpp"

namespace qif {

/// V_g[pi] = max_w sum_x pi(x) g(w,x).
inline double prior_vulnerability(const Prior& pi, const GainFunction& graw) {
  GainFunction g = graw.with_input_order(pi.support());
  double best = 0.0;
  for (size_t w = 0; w < g.n_actions(); ++w) {
    double v = 0.0;
    for (size_t x = 0; x < pi.size(); ++x) v += pi.at(x) * g.at(w, x);
    if (w == 0 || v > best) best = v;
  }
  return best;
}

/// V_g[pi,C] = sum_y max_w sum_x C(x,y) pi(x) g(w,x).
inline double posterior_vulnerability(const Prior& piraw, const Channel& c, const GainFunction& graw) {
  Prior pi = piraw.with_support_order(c.inputs());
  GainFunction g = graw.with_input_order(c.inputs());
  double total = 0.0;
  for (size_t y = 0; y < c.n_outputs(); ++y) {
    double best = 0.0;
    for (size_t w = 0; w < g.n_actions(); ++w) {
      double v = 0.0;
      for (size_t x = 0; x < c.n_inputs(); ++x) v += c.at(x, y) * pi.at(x) * g.at(w, x);
      if (w == 0 || v > best) best = v;
    }
    total += best;
  }
  return total;
}

struct LeakageReport {
  double prior_vulnerability = 0.0;
  double posterior_vulnerability = 0.0;
  std::optional<double> multiplicative;  // absent when V_g[pi] = 0
  double additive = 0.0;

  double multiplicative_ratio() const {
    if (!multiplicative)
      raise(errc::zero_prior_vulnerability, "multiplicative leakage undefined at zero prior vulnerability");
    return *multiplicative;
  }
};

inline LeakageReport leakage(const Prior& pi, const Channel& c, const GainFunction& g) {
  LeakageReport r;
  r.prior_vulnerability = prior_vulnerability(pi, g);
  r.posterior_vulnerability = posterior_vulnerability(pi, c, g);
  r.additive = r.posterior_vulnerability - r.prior_vulnerability;
  if (r.prior_vulnerability > 0.0)
    r.multiplicative = r.posterior_vulnerability / r.prior_vulnerability;
  return r;
}

/// Multiplicative capacity over all priors and gain functions, in bits:
/// log2 of the sum of column maxima.
inline double multiplicative_capacity(const Channel& c) {
  double sum = 0.0;
  for (size_t y = 0; y < c.n_outputs(); ++y) {
    double best = 0.0;
    for (size_t x = 0; x < c.n_inputs(); ++x)
      if (c.at(x, y) > best) best = c.at(x, y);
    sum += best;
  }
  return std::log2(sum);
}

/// Additive capacity over all gain functions at a fixed prior:
/// sum_{x,y} pi(x) |C(x,y) - sum_{x'} pi(x') C(x',y)|.
inline double additive_capacity(const Channel& c, const Prior& piraw) {
  Prior pi = piraw.with_support_order(c.inputs());
  double total = 0.0;
  for (size_t y = 0; y < c.n_outputs(); ++y) {
    double avg = 0.0;
    for (size_t x = 0; x < c.n_inputs(); ++x) avg += pi.at(x) * c.at(x, y);
    for (size_t x = 0; x < c.n_inputs(); ++x) total += pi.at(x) * std::abs(c.at(x, y) - avg);
  }
  return total;
}

/// g_id: actions are the inputs themselves, gain 1 exactly on a correct
/// guess.
inline GainFunction identity_gain(std::vector<Label> inputs) {
  Matrix m = identity_matrix(inputs.size());
  std::vector<Label> actions = inputs;
  return GainFunction(std::move(actions), std::move(inputs), std::move(m));
}

}  // namespace qif
