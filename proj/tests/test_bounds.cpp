#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace qt;

TEST_CASE("parallel bounds examples") {
  auto xs = atom_labels("x", 3);
  Prior pi_u = Prior::uniform(xs);
  GainFunction gid = identity_gain(xs);

  // a null second component collapses the interval onto V(C1)
  Rng rng(51);
  Channel c = random_channel(rng, xs, 4);
  auto b = parallel_bounds(pi_u, gid, c, null_channel(xs, 3));
  double v1 = posterior_vulnerability(pi_u, c, gid);
  CHECK(b.lower == Catch::Approx(v1).margin(1e-12));
  CHECK(b.upper == Catch::Approx(v1).margin(1e-12));
  CHECK(*b.exact == Catch::Approx(v1).margin(1e-12));

  // footnote pair: exact value 1 sits inside the predicted envelope
  auto fb = parallel_bounds(pi_u, gid, footnote_c2(), footnote_c1());
  CHECK(*fb.exact == Catch::Approx(1.0).margin(1e-12));
  CHECK(fb.lower <= *fb.exact + 1e-9);
  CHECK(*fb.exact <= fb.upper + 1e-9);

  // two identities over two inputs: the exact value sits on the lower bound
  // and the predicted ceiling is the column-maxima sum, 2
  auto x2 = atom_labels("x", 2);
  Channel id = transparent_channel(x2);
  auto ib = parallel_bounds(Prior::uniform(x2), identity_gain(x2), id, id);
  CHECK(ib.lower == Catch::Approx(1.0).margin(1e-12));
  CHECK(*ib.exact == Catch::Approx(1.0).margin(1e-12));
  CHECK(ib.upper == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("visible choice linearity examples") {
  auto xs = atom_labels("x", 3);
  Prior pi_u = Prior::uniform(xs);
  GainFunction gid = identity_gain(xs);
  Rng rng(52);
  Channel c1 = random_channel(rng, xs, 3);
  Channel c2 = random_channel(rng, xs, 4, "z");

  CHECK(visible_choice_exact(pi_u, gid, c1, c2, 0.0) ==
        Catch::Approx(posterior_vulnerability(pi_u, c2, gid)).margin(1e-12));

  // V(C1)=1, V(C2)=1/2 at p=1/2 gives 3/4
  auto x2 = atom_labels("x", 2);
  double v = visible_choice_exact(Prior::uniform(x2), identity_gain(x2), transparent_channel(x2),
                                  null_channel(x2, 2), 0.5);
  CHECK(v == Catch::Approx(0.75).margin(1e-12));

  // worked example mixed with a null channel at p = 1/3
  double ve = visible_choice_exact(example1_prior(), identity_gain(xs), example1(),
                                   null_channel(xs, 2), 1.0 / 3);
  CHECK(ve == Catch::Approx((1.0 / 3) * (11.0 / 18) + (2.0 / 3) * 0.5).margin(1e-12));
}

TEST_CASE("hidden choice bounds examples") {
  auto xs = atom_labels("x", 2);
  auto ys = atom_labels("y", 2);
  Prior pi_u = Prior::uniform(xs);
  GainFunction gid = identity_gain(xs);

  // disjoint output sets: the exact value reaches the upper bound
  Rng rng(53);
  Channel c1 = random_channel(rng, xs, 3, "y");
  Channel c2 = random_channel(rng, xs, 2, "z");
  auto b = hidden_choice_bounds(pi_u, gid, c1, c2, 0.4);
  CHECK(*b.exact == Catch::Approx(b.upper).margin(1e-12));

  // identity against flipped identity at 1/2: exact value is the lower bound
  Channel t1 = Channel(xs, ys, identity_matrix(2));
  Channel t2 = Channel::from_rows(xs, ys, {{0, 1}, {1, 0}});
  auto nb = hidden_choice_bounds(pi_u, gid, t1, t2, 0.5);
  CHECK(*nb.exact == Catch::Approx(0.5).margin(1e-12));
  CHECK(nb.lower == Catch::Approx(0.5).margin(1e-12));

  // p=1 collapses everything to V(C1)
  auto ub = hidden_choice_bounds(pi_u, gid, t1, t2, 1.0);
  CHECK(ub.lower == Catch::Approx(1.0).margin(1e-12));
  CHECK(ub.upper == Catch::Approx(1.0).margin(1e-12));
  CHECK(*ub.exact == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("operator ordering chain") {
  Rng rng(54);
  for (int trial = 0; trial < 60; ++trial) {
    auto t = random_triple(rng);
    Prior pi = random_prior(rng, t.c1.inputs());
    GainFunction g = random_gain(rng, t.c1.inputs(), 1 + trial % 5);
    CHECK(operator_ordering_check(pi, g, t.c1, t.c2, t.p));
  }

  // footnote matrices at p = 1/2: the first inequality is strict
  auto xs = atom_labels("x", 3);
  Prior pi_u = Prior::uniform(xs);
  GainFunction gid = identity_gain(xs);
  CHECK(operator_ordering_check(pi_u, gid, footnote_c1(), footnote_c2(), 0.5));
  double v_par = posterior_vulnerability(pi_u, parallel(footnote_c1(), footnote_c2()), gid);
  double v_vis = posterior_vulnerability(pi_u, visible_choice(footnote_c1(), footnote_c2(), 0.5), gid);
  CHECK(v_par > v_vis + 1e-9);
}

TEST_CASE("predicted envelopes contain the exact composed vulnerability") {
  Rng rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    auto t = random_triple(rng);
    Prior pi = random_prior(rng, t.c1.inputs());
    GainFunction g = random_gain(rng, t.c1.inputs(), 1 + trial % 6);

    auto pb = parallel_bounds(pi, g, t.c1, t.c2);
    CHECK(pb.lower <= *pb.exact + 1e-9);
    CHECK(*pb.exact <= pb.upper + 1e-9);

    auto hb = hidden_choice_bounds(pi, g, t.c1, t.c2, t.p);
    CHECK(hb.lower <= *hb.exact + 1e-9);
    CHECK(*hb.exact <= hb.upper + 1e-9);

    CHECK_NOTHROW(visible_choice_exact(pi, g, t.c1, t.c2, t.p));
  }
}

TEST_CASE("monotonicity counterexamples: parallel footnote case") {
  auto r = monotonicity_counterexamples();
  CHECK(r.parallel_component_v2 <= r.parallel_component_v1 + 1e-12);
  CHECK(r.parallel_composed_v21 == Catch::Approx(1.0).margin(1e-12));
  CHECK(r.parallel_composed_v11 == Catch::Approx(2.0 / 3).margin(1e-12));
}

TEST_CASE("monotonicity counterexamples: hidden choice closed forms") {
  for (double p : {0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9}) {
    auto r = monotonicity_counterexamples(p);
    INFO("p = " << p);
    CHECK(r.hidden_composed_v1 == Catch::Approx(r.hidden_predicted_v1).margin(1e-12));
    CHECK(r.hidden_composed_v2 == Catch::Approx(r.hidden_predicted_v2).margin(1e-12));
    CHECK(r.hidden_composed_v1 > r.hidden_composed_v2 + 1e-12);
  }
  auto r = monotonicity_counterexamples(0.4);
  CHECK(r.hidden_composed_v1 == Catch::Approx(0.8).margin(1e-12));
  CHECK(r.hidden_composed_v2 == Catch::Approx(0.6).margin(1e-12));
  auto r2 = monotonicity_counterexamples(0.6);
  CHECK(r2.hidden_composed_v1 == Catch::Approx(0.8).margin(1e-12));
  CHECK(r2.hidden_composed_v2 == Catch::Approx(0.6).margin(1e-12));
}

TEST_CASE("visible choice preserves the leakage order of its components") {
  Rng rng(56);
  for (int trial = 0; trial < 60; ++trial) {
    auto t = random_triple(rng);
    Prior pi = random_prior(rng, t.c1.inputs());
    GainFunction g = random_gain(rng, t.c1.inputs(), 3);
    double v1 = posterior_vulnerability(pi, t.c1, g);
    double v2 = posterior_vulnerability(pi, t.c2, g);
    const Channel& lo = v1 <= v2 ? t.c1 : t.c2;
    const Channel& hi = v1 <= v2 ? t.c2 : t.c1;
    double p = std::max(t.p, 0.05);  // vacuous at p = 0
    CHECK(posterior_vulnerability(pi, visible_choice(lo, t.c3, p), g) <=
          posterior_vulnerability(pi, visible_choice(hi, t.c3, p), g) + 1e-9);
  }
}

TEST_CASE("hidden choice: composed ordering over a family implies component ordering") {
  Rng rng(57);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = random_triple(rng);
    Prior pi = random_prior(rng, t.c1.inputs());
    GainFunction g = random_gain(rng, t.c1.inputs(), 3);
    double p = std::max(t.p, 0.05);
    // family includes c1 itself, which is what makes the converse bite
    std::vector<Channel> family = {t.c1, t.c2, t.c3, null_channel(t.c1.inputs(), 2),
                                   transparent_channel(t.c1.inputs())};
    bool ordered_everywhere = true;
    for (const Channel& c : family) {
      if (posterior_vulnerability(pi, hidden_choice(t.c1, c, p), g) >
          posterior_vulnerability(pi, hidden_choice(t.c2, c, p), g) + 1e-9) {
        ordered_everywhere = false;
        break;
      }
    }
    if (ordered_everywhere)
      CHECK(posterior_vulnerability(pi, t.c1, g) <= posterior_vulnerability(pi, t.c2, g) + 1e-7);
  }
}

TEST_CASE("parallel monotonicity holds when the component ordering is uniform") {
  // Sampling restatement: when no sampled prior orders C1 above C2 at fixed
  // g, no sampled (prior, C) may exhibit the reverse order for C1 ∥ C vs
  // C2 ∥ C. Pairs built by post-processing satisfy the hypothesis for every
  // prior, so the check is never vacuous.
  Rng rng(58);
  for (int trial = 0; trial < 15; ++trial) {
    auto t = random_triple(rng);
    const Channel& c2 = t.c1;
    Channel c1 = cascade(c2, random_channel(rng, c2.outputs(), 3, "z"));
    GainFunction g = random_gain(rng, c2.inputs(), 3);

    bool hypothesis = true;
    for (int s = 0; s < 200 && hypothesis; ++s) {
      Prior pi = random_prior(rng, c2.inputs());
      if (posterior_vulnerability(pi, c1, g) > posterior_vulnerability(pi, c2, g) + 1e-9)
        hypothesis = false;
    }
    REQUIRE(hypothesis);

    for (int s = 0; s < 20; ++s) {
      Prior pi = random_prior(rng, c2.inputs());
      Channel c = random_channel(rng, c2.inputs(), 2 + s % 3, "v");
      CHECK(posterior_vulnerability(pi, parallel(c1, c), g) <=
            posterior_vulnerability(pi, parallel(c2, c), g) + 1e-9);
    }
  }
}
