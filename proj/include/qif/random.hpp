#pragma once

#include <random>
#include <vector>

#include "qif/channel.hpp"

namespace qif {

using Rng = std::mt19937_64;

/// Point on the probability simplex, full support almost surely
/// (normalized exponentials).
inline std::vector<double> random_simplex(Rng& rng, size_t n) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> v(n);
  double sum = 0.0;
  for (double& x : v) {
    x = ex(rng) + 1e-6;
    sum += x;
  }
  for (double& x : v) x /= sum;
  return v;
}

inline Channel random_channel(Rng& rng, const std::vector<Label>& inputs, size_t n_outputs,
                              const std::string& output_prefix = "y") {
  Matrix m(inputs.size(), n_outputs);
  for (size_t x = 0; x < inputs.size(); ++x) {
    auto row = random_simplex(rng, n_outputs);
    for (size_t y = 0; y < n_outputs; ++y) m(x, y) = row[y];
  }
  return Channel(inputs, atom_labels(output_prefix, n_outputs), std::move(m));
}

inline Prior random_prior(Rng& rng, const std::vector<Label>& support) {
  return Prior(support, random_simplex(rng, support.size()));
}

inline GainFunction random_gain(Rng& rng, const std::vector<Label>& inputs, size_t n_actions) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(n_actions, inputs.size());
  for (double& v : m.data) v = u(rng);
  return GainFunction(atom_labels("w", n_actions), inputs, std::move(m));
}

}  // namespace qif
