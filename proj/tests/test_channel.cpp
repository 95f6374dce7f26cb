#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace qt;

TEST_CASE("channel validation accepts well-formed matrices") {
  CHECK_NOTHROW(example1());
  CHECK_NOTHROW(Channel::from_rows({Label::atom("x")}, {Label::atom("y")}, {{1.0}}));
}

TEST_CASE("channel validation rejects bad input") {
  auto xs = atom_labels("x", 1);
  auto ys = atom_labels("y", 2);

  CHECK_THROWS_MATCHES(Channel::from_rows(xs, ys, {{0.5, 0.4}}), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::row_sum; }));
  CHECK_THROWS_MATCHES(Channel::from_rows(xs, ys, {{1.4, -0.4}}), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::negative_entry; }));
  CHECK_THROWS_MATCHES(
      Channel::from_rows(atom_labels("x", 2), {Label::atom("y"), Label::atom("y")},
                         {{0.5, 0.5}, {0.5, 0.5}}),
      error,
      Catch::Matchers::Predicate<error>([](const error& e) { return e.code() == errc::duplicate_label; }));
  CHECK_THROWS_MATCHES(Channel::from_rows(xs, ys, {{1.0}}), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::dimension_mismatch; }));
}

TEST_CASE("rows within tolerance are renormalized to exactly one") {
  Channel c = Channel::from_rows(atom_labels("x", 1), atom_labels("y", 2),
                                 {{0.5 + 2e-10, 0.5 + 2e-10}});
  CHECK(c.at(0, 0) + c.at(0, 1) == 1.0);
}

TEST_CASE("joint distribution reproduces the worked example") {
  Matrix j = joint_distribution(example1(), example1_prior());

  CHECK(j(0, 0) == Catch::Approx(1.0 / 12).margin(1e-12));
  CHECK(j(0, 1) == Catch::Approx(1.0 / 3).margin(1e-12));
  CHECK(j(0, 2) == Catch::Approx(1.0 / 12).margin(1e-12));
  CHECK(j(0, 3) == Catch::Approx(0.0).margin(1e-12));

  const double expected_marginals[4] = {1.0 / 3, 17.0 / 36, 1.0 / 6, 1.0 / 36};
  for (size_t y = 0; y < 4; ++y) {
    double col = j(0, y) + j(1, y) + j(2, y);
    CHECK(col == Catch::Approx(expected_marginals[y]).margin(1e-12));
  }
}

TEST_CASE("uniform prior with the identity channel gives a scaled diagonal") {
  auto xs = atom_labels("x", 4);
  Matrix j = joint_distribution(transparent_channel(xs), Prior::uniform(xs));
  for (size_t x = 0; x < 4; ++x)
    for (size_t y = 0; y < 4; ++y)
      CHECK(j(x, y) == Catch::Approx(x == y ? 0.25 : 0.0).margin(1e-15));
}

TEST_CASE("posterior distributions of the worked example") {
  auto dec = posteriors(example1(), example1_prior());
  REQUIRE(dec.posteriors.size() == 4);
  CHECK(dec.zero_outputs.empty());

  const std::vector<std::vector<double>> expected = {
      {0.25, 0.5, 0.25},
      {12.0 / 17, 3.0 / 17, 2.0 / 17},
      {0.5, 0.5, 0.0},
      {0.0, 0.0, 1.0},
  };
  for (size_t y = 0; y < 4; ++y)
    for (size_t x = 0; x < 3; ++x)
      CHECK(dec.posteriors[y].at(x) == Catch::Approx(expected[y][x]).margin(1e-12));
}

TEST_CASE("null channel posteriors collapse to the prior") {
  auto xs = atom_labels("x", 3);
  Prior pi(xs, {0.2, 0.5, 0.3});
  auto dec = posteriors(null_channel(xs, 4), pi);
  for (const Prior& post : dec.posteriors)
    for (size_t x = 0; x < 3; ++x) CHECK(post.at(x) == Catch::Approx(pi.at(x)).margin(1e-12));
}

TEST_CASE("outputs with zero marginal are skipped and reported") {
  auto xs = atom_labels("x", 2);
  Channel c = Channel::from_rows(xs, atom_labels("y", 3), {{1, 0, 0}, {1, 0, 0}});
  auto dec = posteriors(c, Prior::uniform(xs));
  CHECK(dec.posteriors.size() == 1);
  REQUIRE(dec.zero_outputs.size() == 2);
  CHECK(dec.zero_outputs[0] == Label::atom("y2"));
}

TEST_CASE("prior validation") {
  auto xs = atom_labels("x", 2);
  CHECK_THROWS_AS(Prior(xs, {0.6, 0.5}), error);
  CHECK_THROWS_AS(Prior(xs, {1.2, -0.2}), error);
  CHECK_THROWS_AS(Prior(xs, {1.0}), error);
}

TEST_CASE("random channels: joint mass and posterior reconstruction") {
  Rng rng(20240517);
  for (int trial = 0; trial < 50; ++trial) {
    auto t = random_triple(rng);
    Prior pi = random_prior(rng, t.c1.inputs());

    Matrix j = joint_distribution(t.c1, pi);
    double mass = 0.0;
    for (double v : j.data) mass += v;
    CHECK(mass == Catch::Approx(1.0).margin(1e-9));

    auto dec = posteriors(t.c1, pi);
    for (size_t x = 0; x < t.c1.n_inputs(); ++x) {
      double rebuilt = 0.0;
      for (size_t k = 0; k < dec.posteriors.size(); ++k)
        rebuilt += dec.marginals[k] * dec.posteriors[k].at(x);
      CHECK(rebuilt == Catch::Approx(pi.at(x)).margin(1e-9));
    }
  }
}

TEST_CASE("structured labels order, print and parse") {
  Label a = Label::atom("alpha");
  Label b = Label::pair(Label::atom("y1"), Label::tag(Label::atom("y2"), 2));
  CHECK(a.str() == "alpha");
  CHECK(b.str() == "(y1,y2#2)");
  CHECK(Label::parse(b.str()) == b);
  CHECK(Label::parse("((a,b)#1,c)").str() == "((a,b)#1,c)");
  CHECK(a < b);  // atoms sort before composites
  CHECK_THROWS_AS(Label::parse("(a,b"), error);
  CHECK_THROWS_AS(Label::parse("a#3"), error);
}
