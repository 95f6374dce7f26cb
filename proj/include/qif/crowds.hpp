#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "qif/algebra.hpp"
#include "qif/measures.hpp"

namespace qif {

/// Crowds with evenly distributed corrupt users.
///
/// Honest users form a time-stationary Markov chain: transition(i,j) is the
/// probability that user j receives a request forwarded by user i, given
/// that i is not detected. Independently, every forward reaches a corrupt
/// user with probability q, and every holder sends to the server with
/// probability p.
struct CrowdsModel {
  size_t n_users = 0;
  Matrix transition;  // n_users x n_users, row stochastic
  double q = 0.0;     // forward intercepted by a corrupt user
  double p = 0.0;     // send to the server

  CrowdsModel(size_t n, Matrix t, double q_, double p_)
      : n_users(n), transition(std::move(t)), q(q_), p(p_) {
    if (n_users == 0) raise(errc::invalid_model, "need at least one honest user");
    if (transition.rows != n_users || transition.cols != n_users)
      raise(errc::invalid_model, "transition matrix must be n_users x n_users");
    if (!(q > 0.0 && q <= 1.0)) raise(errc::invalid_model, "q must lie in (0,1]");
    if (!(p > 0.0 && p <= 1.0)) raise(errc::invalid_model, "p must lie in (0,1]");
    for (size_t i = 0; i < n_users; ++i) {
      double sum = 0.0;
      for (size_t j = 0; j < n_users; ++j) {
        if (transition(i, j) < -kRowTol) raise(errc::invalid_model, "negative transition entry");
        sum += transition(i, j);
      }
      if (std::abs(sum - 1.0) > kRowTol)
        raise(errc::invalid_model, "transition row " + std::to_string(i) + " sums to " + std::to_string(sum));
      for (size_t j = 0; j < n_users; ++j) {
        double v = transition(i, j) / sum;
        transition(i, j) = v < 0.0 ? 0.0 : v;
      }
    }
  }

  static CrowdsModel uniform(size_t n, double q, double p) {
    return CrowdsModel(n, Matrix(n, n, 1.0 / static_cast<double>(n)), q, p);
  }

  std::vector<Label> user_labels() const { return atom_labels("u", n_users); }
  std::vector<Label> detected_labels() const { return atom_labels("d", n_users); }
  std::vector<Label> server_labels() const { return atom_labels("s", n_users); }
};

/// The four auxiliary channels: identities onto the detected/server label
/// sets and the transition matrix re-typed over each.
struct CrowdsChannels {
  Channel i_d;  // U x D identity
  Channel i_s;  // U x S identity
  Channel p_d;  // D x D copy of the transition matrix
  Channel p_s;  // S x S copy of the transition matrix
};

inline CrowdsChannels aux_channels(const CrowdsModel& m) {
  auto us = m.user_labels();
  auto ds = m.detected_labels();
  auto ss = m.server_labels();
  Matrix id = identity_matrix(m.n_users);
  return CrowdsChannels{
      Channel(us, ds, id),
      Channel(us, ss, id),
      Channel(ds, ds, m.transition),
      Channel(ss, ss, m.transition),
  };
}

/// t_0 .. t_upto with t_{2i} = 1-(1-q)^{i+1}(1-p)^i and
/// t_{2i+1} = 1-(1-q)^{i+1}(1-p)^{i+1}.
inline std::vector<double> t_sequence(double q, double p, size_t upto) {
  detail::check_probability(q);
  detail::check_probability(p);
  std::vector<double> t(upto + 1);
  double survive = 1.0 - q;  // starts at (1-q)^1 (1-p)^0
  for (size_t k = 0; k <= upto; ++k) {
    t[k] = 1.0 - survive;
    survive *= (k % 2 == 0) ? (1.0 - p) : (1.0 - q);
  }
  return t;
}

namespace detail {

// Channels I_s P_s^k and I_d P_d^k collapse to the k-th transition power
// typed over S or D; the identities only rename inputs.
inline Channel server_power(const CrowdsModel& m, const Matrix& power) {
  return Channel(m.user_labels(), m.server_labels(), power);
}

inline Channel detected_power(const CrowdsModel& m, const Matrix& power) {
  return Channel(m.user_labels(), m.detected_labels(), power);
}

}  // namespace detail

/// C_i: the protocol capped at i forwards per request, as the right-nested
/// hidden-choice chain
///   I_d ⊕_q (I_s P_s ⊕_p (I_d P_d ⊕_q (... ⊕_q I_s P_s^i))).
/// Parenthesization mirrors the event order: detect now, send now, detect
/// after one more hop, and so on.
inline Channel truncated_channel(const CrowdsModel& m, size_t i) {
  if (i < 1) raise(errc::index_out_of_range, "truncation index must be >= 1");
  std::vector<Matrix> powers(i + 1);
  powers[1] = m.transition;
  for (size_t k = 2; k <= i; ++k) powers[k] = multiply(powers[k - 1], m.transition);

  Channel chain = detail::server_power(m, powers[i]);  // I_s P_s^i
  for (size_t j = i - 1; j >= 1; --j) {
    chain = hidden_choice(detail::detected_power(m, powers[j]), chain, m.q);
    chain = hidden_choice(detail::server_power(m, powers[j]), chain, m.p);
  }
  return hidden_choice(aux_channels(m).i_d, chain, m.q);
}

/// K_m: the left-nested flattening of the truncation chain,
///   ((...(I_d ⊕_{t0/t1} I_s P_s) ⊕_{t1/t2} I_d P_d) ... ) ⊕_{t_{2m-1}/t_{2m}} I_d P_d^m,
/// which rescales the first 2m+1 blocks of C_i onto total mass 1.
inline Channel flattened_k(const CrowdsModel& m, size_t mm) {
  if (mm < 1) raise(errc::index_out_of_range, "m must be >= 1");
  auto t = t_sequence(m.q, m.p, 2 * mm);
  Channel acc = aux_channels(m).i_d;
  Matrix power = m.transition;  // current P^j
  for (size_t k = 1; k <= 2 * mm; ++k) {
    if (k % 2 == 1 && k > 1) power = multiply(power, m.transition);
    Channel block =
        (k % 2 == 1) ? detail::server_power(m, power) : detail::detected_power(m, power);
    acc = hidden_choice(acc, block, t[k - 1] / t[k]);
  }
  return acc;
}

struct CrowdsBounds {
  size_t m = 0;
  std::vector<double> t;  // t_0 .. t_{2m}
  double lower = 0.0;
  double upper = 0.0;
  double gap_bound = 0.0;  // (1-q)^{m+1} (1-p)^m
};

/// Sandwiches V_g[pi, Crowds] between t_{2m} V_g[pi, K_m] and that plus
/// (1-t_{2m}) V_g[pi, I_s P_s^{m+1}]. Costs m+1 transition products.
inline CrowdsBounds leakage_bounds(const CrowdsModel& m, const Prior& pi, const GainFunction& g,
                                   size_t mm) {
  if (mm < 1) raise(errc::index_out_of_range, "m must be >= 1");
  CrowdsBounds out;
  out.m = mm;
  out.t = t_sequence(m.q, m.p, 2 * mm);
  out.gap_bound = std::pow(1.0 - m.q, static_cast<double>(mm + 1)) *
                  std::pow(1.0 - m.p, static_cast<double>(mm));

  double t2m = out.t[2 * mm];
  out.lower = t2m * posterior_vulnerability(pi, flattened_k(m, mm), g);

  Matrix power = m.transition;
  for (size_t k = 2; k <= mm + 1; ++k) power = multiply(power, m.transition);
  double tail = posterior_vulnerability(pi, detail::server_power(m, power), g);
  out.upper = out.lower + (1.0 - t2m) * tail;
  return out;
}

/// Smallest m with (1-q)^{m+1} (1-p)^m <= epsilon, the truncation depth
/// needed for a given bound precision.
inline size_t m_for_precision(double q, double p, double epsilon) {
  detail::check_probability(q);
  detail::check_probability(p);
  if (epsilon <= 0.0) raise(errc::bad_probability, "precision must be positive");
  if (q == 0.0 && p == 0.0)
    raise(errc::bad_probability, "q and p cannot both be zero; the gap would never shrink");
  double gap = (1.0 - q) * (1.0 - q) * (1.0 - p);  // m = 1
  size_t m = 1;
  while (gap > epsilon) {
    gap *= (1.0 - q) * (1.0 - p);
    ++m;
  }
  return m;
}

}  // namespace qif
