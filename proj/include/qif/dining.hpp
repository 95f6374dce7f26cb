#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qif/algebra.hpp"
#include "qif/measures.hpp"

namespace qif {

enum class Topology { cycle, complete, custom };

inline const char* topology_name(Topology t) {
  switch (t) {
    case Topology::cycle: return "cycle";
    case Topology::complete: return "complete";
    case Topology::custom: return "custom";
  }
  return "?";
}

/// Dining Cryptographers instance: n cryptographers plus the NSA as possible
/// payers, one coin per edge of the coin-sharing graph, each coin with its
/// own probability of tails. Cryptographer i announces the XOR of all coins
/// incident to i (heads = 0, tails = 1), negated iff i is the payer.
struct DiningConfig {
  size_t n = 0;
  Topology topology = Topology::cycle;
  std::vector<std::pair<size_t, size_t>> edges;  // 0-based cryptographer indices, one coin per edge
  std::vector<double> coin_bias;                 // probability of tails per coin

  static DiningConfig cycle(size_t n, double bias) {
    DiningConfig c;
    c.n = n;
    c.topology = Topology::cycle;
    for (size_t i = 0; i < n; ++i) c.edges.emplace_back(i, (i + 1) % n);
    c.coin_bias.assign(c.edges.size(), bias);
    c.validate();
    return c;
  }

  static DiningConfig complete(size_t n, double bias) {
    DiningConfig c;
    c.n = n;
    c.topology = Topology::complete;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) c.edges.emplace_back(i, j);
    c.coin_bias.assign(c.edges.size(), bias);
    c.validate();
    return c;
  }

  static DiningConfig custom(size_t n, std::vector<std::pair<size_t, size_t>> edges,
                             std::vector<double> biases) {
    DiningConfig c;
    c.n = n;
    c.topology = Topology::custom;
    c.edges = std::move(edges);
    c.coin_bias = std::move(biases);
    c.validate();
    return c;
  }

  DiningConfig with_uniform_bias(double bias) const {
    DiningConfig c = *this;
    c.coin_bias.assign(c.edges.size(), bias);
    return c;
  }

  void validate() const {
    if (n < 3) raise(errc::invalid_model, "need at least 3 cryptographers");
    if (coin_bias.size() != edges.size())
      raise(errc::invalid_model, "one bias per coin required");
    for (double b : coin_bias)
      if (!(b >= 0.0 && b <= 1.0)) raise(errc::bad_probability, "coin bias outside [0,1]");
    std::set<std::pair<size_t, size_t>> seen;
    std::vector<bool> incident(n, false);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n || u == v) raise(errc::invalid_model, "bad coin edge");
      auto key = std::minmax(u, v);
      if (!seen.insert({key.first, key.second}).second)
        raise(errc::invalid_model, "duplicate coin edge");
      incident[u] = incident[v] = true;
    }
    for (size_t i = 0; i < n; ++i)
      if (!incident[i])
        raise(errc::invalid_model, "cryptographer " + std::to_string(i + 1) + " holds no coin");
  }

  /// Payer identities: c1..cn then "nsa".
  std::vector<Label> payer_labels() const {
    std::vector<Label> xs = atom_labels("c", n);
    xs.push_back(Label::atom("nsa"));
    return xs;
  }
};

/// One coin toss: every input row is (bias, 1 - bias) over {Tails, Heads}.
/// A coin is a null channel; on its own it reveals nothing about the payer.
inline Channel coin_channel(std::vector<Label> inputs, double bias) {
  detail::check_probability(bias);
  Matrix m(inputs.size(), 2);
  for (size_t x = 0; x < m.rows; ++x) {
    m(x, 0) = bias;
    m(x, 1) = 1.0 - bias;
  }
  return Channel(std::move(inputs), {Label::atom("Tails"), Label::atom("Heads")}, std::move(m));
}

/// Coin_1 ∥ ... ∥ Coin_k ∥ I: all tosses next to the identity that forwards
/// the payer to the announcement phase.
inline Channel coins_channel(const DiningConfig& cfg) {
  auto xs = cfg.payer_labels();
  Channel acc = coin_channel(xs, cfg.coin_bias[0]);
  for (size_t e = 1; e < cfg.edges.size(); ++e) acc = parallel(acc, coin_channel(xs, cfg.coin_bias[e]));
  return parallel(acc, transparent_channel(xs));
}

namespace detail {

// The output labels of coins_channel together with each label's decoded
// (coin tails-bits, payer index). Bit e of the mask is coin e's toss.
struct CoinSpace {
  std::vector<Label> labels;
  std::vector<std::pair<std::uint64_t, size_t>> decoded;
};

inline CoinSpace coin_space(const DiningConfig& cfg) {
  const size_t coins = cfg.edges.size();
  if (coins > 62) raise(errc::channel_too_large, "too many coins to enumerate");
  auto payers = cfg.payer_labels();
  Label tails = Label::atom("Tails");
  Label heads = Label::atom("Heads");

  CoinSpace space;
  space.labels.reserve((size_t{1} << coins) * payers.size());
  space.decoded.reserve(space.labels.capacity());
  // Mirrors the left fold in coins_channel: coin 1 varies slowest, the
  // payer fastest, and per coin Tails precedes Heads.
  for (std::uint64_t step = 0; step < (std::uint64_t{1} << coins); ++step) {
    std::uint64_t mask = 0;
    Label coin_part = tails;
    for (size_t e = 0; e < coins; ++e) {
      bool is_tails = ((step >> (coins - 1 - e)) & 1) == 0;
      if (is_tails) mask |= std::uint64_t{1} << e;
      const Label& toss = is_tails ? tails : heads;
      coin_part = e == 0 ? toss : Label::pair(coin_part, toss);
    }
    for (size_t payer = 0; payer < payers.size(); ++payer) {
      space.labels.push_back(Label::pair(coin_part, payers[payer]));
      space.decoded.emplace_back(mask, payer);
    }
  }
  return space;
}

inline std::uint64_t announcement_bits(const DiningConfig& cfg, std::uint64_t coin_mask,
                                       size_t payer) {
  std::uint64_t bits = 0;
  for (size_t e = 0; e < cfg.edges.size(); ++e) {
    if ((coin_mask >> e) & 1) {
      bits ^= std::uint64_t{1} << cfg.edges[e].first;
      bits ^= std::uint64_t{1} << cfg.edges[e].second;
    }
  }
  if (payer < cfg.n) bits ^= std::uint64_t{1} << payer;
  return bits;
}

// Announcement tuples as nested pairs of "0"/"1", cryptographer 1 outermost;
// index s reads the tuple as a binary number with crypto 1 the top bit.
inline std::vector<Label> announcement_labels(size_t n) {
  Label zero = Label::atom("0");
  Label one = Label::atom("1");
  std::vector<Label> out;
  out.reserve(size_t{1} << n);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    Label l = ((s >> (n - 1)) & 1) ? one : zero;
    for (size_t i = 1; i < n; ++i) l = Label::pair(l, ((s >> (n - 1 - i)) & 1) ? one : zero);
    out.push_back(l);
  }
  return out;
}

inline std::uint64_t announcement_index(size_t n, std::uint64_t bits) {
  std::uint64_t s = 0;
  for (size_t i = 0; i < n; ++i) s = (s << 1) | ((bits >> i) & 1);
  return s;
}

}  // namespace detail

/// Cryptographer i's announcement (i is 1-based): a deterministic channel
/// from (coin outcomes, payer) to {0,1}.
inline Channel crypto_channel(const DiningConfig& cfg, size_t i) {
  if (i < 1 || i > cfg.n) raise(errc::index_out_of_range, "cryptographer index " + std::to_string(i));
  auto space = detail::coin_space(cfg);
  Matrix m(space.labels.size(), 2);
  for (size_t r = 0; r < space.labels.size(); ++r) {
    auto [mask, payer] = space.decoded[r];
    std::uint64_t bits = detail::announcement_bits(cfg, mask, payer);
    m(r, ((bits >> (i - 1)) & 1) ? 1 : 0) = 1.0;
  }
  return Channel(space.labels, {Label::atom("0"), Label::atom("1")}, std::move(m));
}

namespace detail {

inline Channel dining_compositional(const DiningConfig& cfg) {
  Channel coins = coins_channel(cfg);
  Channel ann = crypto_channel(cfg, 1);
  for (size_t i = 2; i <= cfg.n; ++i) ann = parallel(ann, crypto_channel(cfg, i));
  return cascade(coins, ann);
}

// Folds coins into the announcement distribution one at a time instead of
// materializing the coin space: a tails toss XORs both incident
// announcement bits, so each coin is a two-point mixture over masks.
inline Channel dining_streamed(const DiningConfig& cfg) {
  const size_t width = size_t{1} << cfg.n;
  auto payers = cfg.payer_labels();
  Matrix m(payers.size(), width);
  std::vector<double> dist(width), next(width);
  for (size_t payer = 0; payer < payers.size(); ++payer) {
    std::fill(dist.begin(), dist.end(), 0.0);
    dist[announcement_index(cfg.n, payer < cfg.n ? (std::uint64_t{1} << payer) : 0)] = 1.0;
    for (size_t e = 0; e < cfg.edges.size(); ++e) {
      double tails = cfg.coin_bias[e];
      std::uint64_t flip = announcement_index(
          cfg.n, (std::uint64_t{1} << cfg.edges[e].first) ^ (std::uint64_t{1} << cfg.edges[e].second));
      for (std::uint64_t s = 0; s < width; ++s)
        next[s] = (1.0 - tails) * dist[s] + tails * dist[s ^ flip];
      dist.swap(next);
    }
    for (std::uint64_t s = 0; s < width; ++s) m(payer, s) = dist[s];
  }
  return Channel(payers, announcement_labels(cfg.n), std::move(m));
}

}  // namespace detail

/// Coins cascaded into the parallel announcements. Falls back to the
/// streamed builder when materializing the coin space would exceed 2^22
/// cells; refuses outright when even the result would.
inline Channel dining_channel(const DiningConfig& cfg) {
  cfg.validate();
  constexpr double cell_limit = 4194304.0;  // 2^22
  const double n_inputs = static_cast<double>(cfg.n) + 1.0;
  const double coin_cols = std::pow(2.0, static_cast<double>(cfg.edges.size())) * n_inputs;
  const double out_cols = std::pow(2.0, static_cast<double>(cfg.n));
  if (n_inputs * out_cols > cell_limit)
    raise(errc::channel_too_large,
          "dining channel for n = " + std::to_string(cfg.n) + " exceeds the cell budget");
  if (coin_cols * n_inputs > cell_limit || coin_cols * out_cols > cell_limit)
    return detail::dining_streamed(cfg);
  return detail::dining_compositional(cfg);
}

struct CapacityPoint {
  Topology topology = Topology::cycle;
  size_t n = 0;
  double bias = 0.0;
  double mult_capacity = 0.0;
  double add_capacity = 0.0;
};

/// Rebuilds the channel at each bias (applied to every coin) and records
/// both capacities.
inline std::vector<CapacityPoint> capacity_sweep(const DiningConfig& cfg,
                                                 const std::vector<double>& biases,
                                                 const Prior& prior) {
  std::vector<CapacityPoint> out;
  out.reserve(biases.size());
  for (double b : biases) {
    Channel ch = dining_channel(cfg.with_uniform_bias(b));
    CapacityPoint pt;
    pt.topology = cfg.topology;
    pt.n = cfg.n;
    pt.bias = b;
    pt.mult_capacity = multiplicative_capacity(ch);
    pt.add_capacity = additive_capacity(ch, prior);
    out.push_back(pt);
  }
  return out;
}

}  // namespace qif
