#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace qt;

TEST_CASE("prior vulnerability examples") {
  auto x2 = atom_labels("x", 2);
  CHECK(prior_vulnerability(Prior::uniform(x2), identity_gain(x2)) == Catch::Approx(0.5));

  auto x3 = atom_labels("x", 3);
  CHECK(prior_vulnerability(example1_prior(), identity_gain(x3)) == Catch::Approx(0.5));

  GainFunction ones = GainFunction::from_rows({Label::atom("w")}, x3, {{1, 1, 1}});
  CHECK(prior_vulnerability(example1_prior(), ones) == Catch::Approx(1.0));
}

TEST_CASE("posterior vulnerability of the worked example is 11/18") {
  double v = posterior_vulnerability(example1_prior(), example1(), identity_gain(atom_labels("x", 3)));
  CHECK(v == Catch::Approx(11.0 / 18).margin(1e-12));

  // cross-check against a literal sum of joint-table column maxima
  Matrix j = joint_distribution(example1(), example1_prior());
  double oracle = 0.0;
  for (size_t y = 0; y < j.cols; ++y) {
    double best = 0.0;
    for (size_t x = 0; x < j.rows; ++x) best = std::max(best, j(x, y));
    oracle += best;
  }
  CHECK(v == Catch::Approx(oracle).margin(1e-12));
}

TEST_CASE("null channels leak nothing, transparent channels everything") {
  Rng rng(31);
  auto xs = atom_labels("x", 4);
  Prior pi = random_prior(rng, xs);
  GainFunction g = random_gain(rng, xs, 5);
  CHECK(posterior_vulnerability(pi, null_channel(xs, 3), g) ==
        Catch::Approx(prior_vulnerability(pi, g)).margin(1e-12));
  CHECK(posterior_vulnerability(Prior::uniform(xs), transparent_channel(xs), identity_gain(xs)) ==
        Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("leakage report") {
  auto xs = atom_labels("x", 4);
  GainFunction gid = identity_gain(xs);

  LeakageReport null_rep = leakage(Prior::uniform(xs), null_channel(xs, 2), gid);
  CHECK(null_rep.multiplicative_ratio() == Catch::Approx(1.0).margin(1e-12));
  CHECK(null_rep.additive == Catch::Approx(0.0).margin(1e-12));

  LeakageReport id_rep = leakage(Prior::uniform(xs), transparent_channel(xs), gid);
  CHECK(id_rep.multiplicative_ratio() == Catch::Approx(4.0).margin(1e-12));
  CHECK(id_rep.additive == Catch::Approx(0.75).margin(1e-12));

  auto x3 = atom_labels("x", 3);
  LeakageReport ex = leakage(example1_prior(), example1(), identity_gain(x3));
  CHECK(ex.additive == Catch::Approx(1.0 / 9).margin(1e-12));
}

TEST_CASE("zero prior vulnerability leaves the ratio undefined") {
  auto xs = atom_labels("x", 2);
  GainFunction zero = GainFunction::from_rows({Label::atom("w")}, xs, {{0, 0}});
  LeakageReport r = leakage(Prior::uniform(xs), transparent_channel(xs), zero);
  CHECK_FALSE(r.multiplicative.has_value());
  CHECK(r.additive == Catch::Approx(0.0).margin(1e-12));
  CHECK_THROWS_MATCHES(r.multiplicative_ratio(), error,
                       Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::zero_prior_vulnerability;
                       }));
}

TEST_CASE("multiplicative capacity examples") {
  auto xs = atom_labels("x", 3);
  CHECK(multiplicative_capacity(null_channel(xs, 4)) == Catch::Approx(0.0).margin(1e-12));
  CHECK(multiplicative_capacity(transparent_channel(atom_labels("x", 5))) ==
        Catch::Approx(std::log2(5.0)).margin(1e-12));
  CHECK(multiplicative_capacity(example1()) == Catch::Approx(std::log2(19.0 / 12.0)).margin(1e-12));
}

TEST_CASE("additive capacity examples") {
  auto xs = atom_labels("x", 2);
  Channel id = transparent_channel(xs);
  CHECK(additive_capacity(null_channel(xs, 3), Prior::uniform(xs)) == Catch::Approx(0.0).margin(1e-12));
  CHECK(additive_capacity(id, Prior::uniform(xs)) == Catch::Approx(1.0).margin(1e-12));
  CHECK(additive_capacity(id, Prior(xs, {1.0, 0.0})) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("identity gain shape") {
  CHECK(identity_gain(atom_labels("x", 1)).at(0, 0) == 1.0);
  GainFunction g = identity_gain(atom_labels("x", 4));
  for (size_t w = 0; w < 4; ++w)
    for (size_t x = 0; x < 4; ++x) CHECK(g.at(w, x) == (w == x ? 1.0 : 0.0));
}

TEST_CASE("observing a channel never hurts") {
  Rng rng(32);
  for (int trial = 0; trial < 60; ++trial) {
    auto t = random_triple(rng);
    Prior pi = random_prior(rng, t.c1.inputs());
    GainFunction g = random_gain(rng, t.c1.inputs(), 1 + trial % 6);
    CHECK(posterior_vulnerability(pi, t.c1, g) >= prior_vulnerability(pi, g) - 1e-9);
  }
}

TEST_CASE("posterior vulnerability decomposes over the posteriors") {
  Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    auto t = random_triple(rng);
    Prior pi = random_prior(rng, t.c1.inputs());
    GainFunction g = random_gain(rng, t.c1.inputs(), 4);
    auto dec = posteriors(t.c1, pi);
    double via_posteriors = 0.0;
    for (size_t k = 0; k < dec.posteriors.size(); ++k)
      via_posteriors += dec.marginals[k] * prior_vulnerability(dec.posteriors[k], g);
    CHECK(posterior_vulnerability(pi, t.c1, g) == Catch::Approx(via_posteriors).margin(1e-9));
  }
}

TEST_CASE("capacities dominate the leakage they cap") {
  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    auto t = random_triple(rng);
    GainFunction gid = identity_gain(t.c1.inputs());
    for (int s = 0; s < 20; ++s) {
      Prior pi = random_prior(rng, t.c1.inputs());
      LeakageReport r = leakage(pi, t.c1, gid);
      CHECK(multiplicative_capacity(t.c1) >= std::log2(r.multiplicative_ratio()) - 1e-9);
      CHECK(additive_capacity(t.c1, pi) >= r.additive - 1e-9);
    }
  }
}

TEST_CASE("capacities are invariant under output permutation") {
  Rng rng(35);
  auto t = random_triple(rng);
  Channel sorted = canonical(visible_choice(t.c1, t.c2, t.p));
  Channel raw = visible_choice(t.c1, t.c2, t.p);
  Prior pi = random_prior(rng, t.c1.inputs());
  CHECK(multiplicative_capacity(sorted) == Catch::Approx(multiplicative_capacity(raw)).margin(1e-9));
  CHECK(additive_capacity(sorted, pi) == Catch::Approx(additive_capacity(raw, pi)).margin(1e-9));
}
