#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qif/algebra.hpp"
#include "qif/measures.hpp"

namespace qif {

struct BoundInterval {
  double lower = 0.0;
  double upper = 0.0;
  /// Direct evaluation on the composed channel; the theorems are predicted
  /// envelopes, the operators the ground truth.
  std::optional<double> exact;
};

namespace detail {

// X' = {x : pi(x) g(w,x) > 0 for some w}, with a strict threshold so float
// dust cannot enlarge the support.
inline std::vector<bool> effective_support(const Prior& pi, const GainFunction& g) {
  std::vector<bool> in(pi.size(), false);
  for (size_t x = 0; x < pi.size(); ++x)
    for (size_t w = 0; w < g.n_actions(); ++w)
      if (pi.at(x) * g.at(w, x) > 1e-12) {
        in[x] = true;
        break;
      }
  return in;
}

inline double column_max_sum_over(const Channel& c, const std::vector<bool>& support) {
  double sum = 0.0;
  for (size_t y = 0; y < c.n_outputs(); ++y) {
    double best = 0.0;
    for (size_t x = 0; x < c.n_inputs(); ++x)
      if (support[x] && c.at(x, y) > best) best = c.at(x, y);
    sum += best;
  }
  return sum;
}

}  // namespace detail

/// max(V1,V2) <= V_g[pi, C1 ∥ C2] <= min(V1 * sum_y2 max_{X'} C2,
///                                        V2 * sum_y1 max_{X'} C1).
inline BoundInterval parallel_bounds(const Prior& piraw, const GainFunction& graw, const Channel& c1,
                                     const Channel& c2) {
  Prior pi = piraw.with_support_order(c1.inputs());
  GainFunction g = graw.with_input_order(c1.inputs());
  Channel c2a = c2.with_input_order(c1.inputs());
  double v1 = posterior_vulnerability(pi, c1, g);
  double v2 = posterior_vulnerability(pi, c2a, g);
  auto support = detail::effective_support(pi, g);
  BoundInterval b;
  b.lower = std::max(v1, v2);
  b.upper = std::min(v1 * detail::column_max_sum_over(c2a, support),
                     v2 * detail::column_max_sum_over(c1, support));
  b.exact = posterior_vulnerability(pi, parallel(c1, c2a), g);
  return b;
}

/// V_g[pi, C1 ⊔_p C2] = p V1 + (1-p) V2, exactly.
inline double visible_choice_exact(const Prior& pi, const GainFunction& g, const Channel& c1,
                                   const Channel& c2, double p) {
  double predicted = p * posterior_vulnerability(pi, c1, g) +
                     (1.0 - p) * posterior_vulnerability(pi, c2, g);
  double direct = posterior_vulnerability(pi, visible_choice(c1, c2, p), g);
  if (std::abs(predicted - direct) > 1e-9)
    throw std::logic_error("visible-choice linearity violated; operator or measure is broken");
  return predicted;
}

/// max(p V1, (1-p) V2) <= V_g[pi, C1 ⊕_p C2] <= p V1 + (1-p) V2.
inline BoundInterval hidden_choice_bounds(const Prior& pi, const GainFunction& g, const Channel& c1,
                                          const Channel& c2, double p) {
  double v1 = posterior_vulnerability(pi, c1, g);
  double v2 = posterior_vulnerability(pi, c2, g);
  BoundInterval b;
  b.lower = std::max(p * v1, (1.0 - p) * v2);
  b.upper = p * v1 + (1.0 - p) * v2;
  b.exact = posterior_vulnerability(pi, hidden_choice(c1, c2, p), g);
  return b;
}

/// V(C1 ∥ C2) >= V(C1 ⊔_p C2) >= V(C1 ⊕_p C2), checked by direct
/// evaluation of all three compositions.
inline bool operator_ordering_check(const Prior& pi, const GainFunction& g, const Channel& c1,
                                    const Channel& c2, double p, double slack = 1e-9) {
  double v_par = posterior_vulnerability(pi, parallel(c1, c2), g);
  double v_vis = posterior_vulnerability(pi, visible_choice(c1, c2, p), g);
  double v_hid = posterior_vulnerability(pi, hidden_choice(c1, c2, p), g);
  return v_par >= v_vis - slack && v_vis >= v_hid - slack;
}

/// The two classic failures of relative monotonicity, reconstructed from
/// their exact matrices and evaluated under (pi_u, g_id).
///
/// Parallel case: V(C2) <= V(C1) componentwise, yet C2 ∥ C1 is transparent
/// while C1 ∥ C1 is not. Hidden case: C2 transparent dominates C1 for every
/// prior and gain, yet mixing each with the flipped identity reverses the
/// order; closed forms are (1 - p/2 vs 1 - p) for p <= 0.5 and
/// ((p+1)/2 vs p) above.
struct MonotonicityCounterexamples {
  // parallel footnote case
  double parallel_component_v1 = 0.0;  // V(C1)
  double parallel_component_v2 = 0.0;  // V(C2)
  double parallel_composed_v21 = 0.0;  // V(C2 ∥ C1)
  double parallel_composed_v11 = 0.0;  // V(C1 ∥ C1)
  // hidden-choice case at probability p
  double p = 0.0;
  double hidden_composed_v1 = 0.0;  // V(C1 ⊕_p C)
  double hidden_composed_v2 = 0.0;  // V(C2 ⊕_p C)
  double hidden_predicted_v1 = 0.0;
  double hidden_predicted_v2 = 0.0;
};

inline MonotonicityCounterexamples monotonicity_counterexamples(double p = 0.5) {
  detail::check_probability(p);
  MonotonicityCounterexamples r;
  r.p = p;

  {
    auto xs = atom_labels("x", 3);
    Channel c1 = Channel::from_rows(xs, atom_labels("y", 2), {{1, 0}, {1, 0}, {0, 1}});
    Channel c2 = Channel::from_rows(xs, atom_labels("y", 2), {{1, 0}, {0, 1}, {0, 1}});
    Prior pi = Prior::uniform(xs);
    GainFunction g = identity_gain(xs);
    r.parallel_component_v1 = posterior_vulnerability(pi, c1, g);
    r.parallel_component_v2 = posterior_vulnerability(pi, c2, g);
    r.parallel_composed_v21 = posterior_vulnerability(pi, parallel(c2, c1), g);
    r.parallel_composed_v11 = posterior_vulnerability(pi, parallel(c1, c1), g);
  }

  {
    auto xs = atom_labels("x", 2);
    auto ys = atom_labels("y", 2);
    Channel c2 = Channel::from_rows(xs, ys, {{1, 0}, {0, 1}});
    Channel c = Channel::from_rows(xs, ys, {{0, 1}, {1, 0}});
    Channel c1 = p <= 0.5
                     ? Channel::from_rows(xs, ys, {{0.5, 0.5}, {0.5, 0.5}})
                     : Channel::from_rows(xs, ys,
                                          {{0.5 / p - 0.5, 1.5 - 0.5 / p}, {1.5 - 0.5 / p, 0.5 / p - 0.5}});
    Prior pi = Prior::uniform(xs);
    GainFunction g = identity_gain(xs);
    r.hidden_composed_v1 = posterior_vulnerability(pi, hidden_choice(c1, c, p), g);
    r.hidden_composed_v2 = posterior_vulnerability(pi, hidden_choice(c2, c, p), g);
    r.hidden_predicted_v1 = p <= 0.5 ? 1.0 - p / 2.0 : (p + 1.0) / 2.0;
    r.hidden_predicted_v2 = p <= 0.5 ? 1.0 - p : p;
  }
  return r;
}

}  // namespace qif
