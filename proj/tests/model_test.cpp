#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "mtdhg/model.hpp"

using namespace mtdhg;

namespace {

Vector V(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("validate: minimal instance is accepted") {
  const auto game = validate_instance(fixture::minimal_raw());
  CHECK(game.num_targets() == 1);
  CHECK(game.num_types() == 1);
  CHECK(game.defender_gain()(0) == 1);
  CHECK(game.attacker_gain()(0, 0) == 1);
}

TEST_CASE("validate: defender gain sign") {
  auto raw = fixture::minimal_raw();
  raw.defender_uncovered_payoff = {2};
  try {
    validate_instance(raw);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.has("AssumptionViolation"));
    CHECK(std::string(e.what()).find("target 0") != std::string::npos);
  }
}

TEST_CASE("validate: probability mass") {
  auto raw = fixture::i2_raw();
  raw.num_types = 2;
  raw.type_probabilities = {0.6, 0.6};
  raw.attacker_covered_payoff.push_back({0, 0});
  raw.attacker_uncovered_payoff.push_back({1, 1});
  try {
    validate_instance(raw);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.has("ProbabilityError"));
    CHECK_FALSE(e.has("AssumptionViolation"));
  }
}

TEST_CASE("validate: every violation is listed") {
  auto raw = fixture::i2_raw();
  raw.type_probabilities = {-0.5};
  raw.defender_uncovered_payoff = {0, 3};
  raw.attacker_covered_payoff = {{2, 0}};
  raw.attacker_uncovered_payoff = {{1, 1, 1}};
  raw.true_type_index = 4;
  try {
    validate_instance(raw);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.has("ShapeError"));
    CHECK(e.has("ProbabilityError"));
    CHECK(e.has("AssumptionViolation"));
    CHECK(e.violations().size() >= 4);
  }
}

TEST_CASE("validate: harness instances always pass") {
  for (int i = 0; i < 50; ++i) {
    const auto game = fixture::random_game(1000 + i, 1 + i % 4, 1 + (i / 4) % 4);
    CHECK_NOTHROW(validate_instance(game.to_raw()));
  }
}

TEST_CASE("strategy types enforce their simplex") {
  CHECK_NOTHROW(DefenderStrategy(V({0.25, 0.75}), 1.0));
  CHECK_THROWS_AS(DefenderStrategy(V({0.5, 0.6}), 1.0), ShapeError);
  CHECK_THROWS_AS(DefenderStrategy(V({-0.1, 1.1}), 1.0), ShapeError);
  Matrix y(2, 2);
  y << 1, 0, 0.5, 0.5;
  CHECK_NOTHROW(AttackerPolicy(y, 1.0));
  y(1, 1) = 0.4;
  CHECK_THROWS_AS(AttackerPolicy(y, 1.0), ShapeError);
  CHECK_THROWS_AS(TypeDistribution(V({0.5, 0.6})), ProbabilityError);
}

TEST_CASE("utilities on I2") {
  const auto g = fixture::i2();
  CHECK(defender_utility(g, V({0.5, 0.5}), V({1, 0})) == doctest::Approx(0.5));
  CHECK(defender_utility(g, V({0, 1}), V({1, 0})) == doctest::Approx(0));
  CHECK(attacker_utility(g, V({0.3, 0.7}), V({1, 0}), 0) == doctest::Approx(0.7));
  const Vector a = attack_values(g, V({0.3, 0.7}), 0);
  CHECK(a(0) == doctest::Approx(0.7));
  CHECK(a(1) == doctest::Approx(0.3));
  CHECK_THROWS(attack_values(g, V({0.3, 0.7}), 1));
}

TEST_CASE("utilities: single target") {
  auto raw = fixture::minimal_raw();
  raw.defender_budget = 2.5;
  raw.attacker_budget = 3;
  raw.defender_covered_payoff = {4};
  const auto g = validate_instance(raw);
  CHECK(defender_utility(g, V({2.5}), V({3})) == doctest::Approx(3 * 2.5 * 4));
  CHECK(attacker_utility(g, V({2.5}), V({3}), 0) == doctest::Approx(3 * 2.5 * 0));
}

TEST_CASE("expected utility with two types") {
  const auto g = fixture::i2_two_types();
  Matrix y(2, 2);
  y << 1, 0, 0, 1;
  CHECK(expected_defender_utility(g, V({0.5, 0.5}), y, distribution_of(g)) ==
        doctest::Approx(0.5));
  // One-point distribution picks out one row.
  const TypeDistribution one(V({1, 0}));
  CHECK(expected_defender_utility(g, V({0.2, 0.8}), y, one) ==
        doctest::Approx(defender_utility(g, V({0.2, 0.8}), y.row(0).transpose())));
  // Identical rows collapse.
  y << 0.3, 0.7, 0.3, 0.7;
  CHECK(expected_defender_utility(g, V({0.2, 0.8}), y, distribution_of(g)) ==
        doctest::Approx(defender_utility(g, V({0.2, 0.8}), y.row(0).transpose())));
}

TEST_CASE("best-response sets") {
  const auto g = fixture::i2();
  CHECK(best_response_set(g, V({0.3, 0.7}), 0) == TargetSet{0});
  CHECK(best_response_set(g, V({0.5, 0.5}), 0) == TargetSet{0, 1});
  CHECK(best_response_set(validate_instance(fixture::minimal_raw()), V({1}), 0) == TargetSet{0});
}

TEST_CASE("defender coefficients") {
  const auto g = fixture::i2();
  Matrix y(1, 2);
  y << 1, 0;
  const auto form = defender_coefficients(g, y, distribution_of(g));
  CHECK(form.coefficients(0) == doctest::Approx(1));
  CHECK(form.coefficients(1) == doctest::Approx(0));
  CHECK(form.constant == doctest::Approx(0));
}

TEST_CASE("properties on random instances") {
  std::mt19937_64 rng(5);
  auto simplex_point = [&](Index K, double total) {
    std::exponential_distribution<double> e(1.0);
    Vector v = Vector::NullaryExpr(K, [&] { return e(rng); });
    return Vector(v * (total / v.sum()));
  };
  for (int i = 0; i < 40; ++i) {
    const int n = 1 + i % 3, K = 2 + i % 3;
    const auto g = fixture::random_game(77 + i, n, K);
    const Vector x = simplex_point(K, g.defender_budget());
    Matrix y(n, K);
    for (int j = 0; j < n; ++j) y.row(j) = simplex_point(K, g.attacker_budget()).transpose();
    const auto dist = distribution_of(g);

    // Linear form reproduces the expectation.
    const auto form = defender_coefficients(g, y, dist);
    CHECK(form.coefficients.dot(x) + form.constant ==
          doctest::Approx(expected_defender_utility(g, x, y, dist)).epsilon(1e-12));

    for (int j = 0; j < n; ++j) {
      const Vector y1 = y.row(j).transpose();
      const Vector y2 = simplex_point(K, g.attacker_budget());
      CHECK(attack_values(g, x, j).dot(y1) ==
            doctest::Approx(attacker_utility(g, x, y1, j)).epsilon(1e-12));
      // Linearity in y.
      const double alpha = 0.3;
      CHECK(attacker_utility(g, x, alpha * y1 + (1 - alpha) * y2, j) ==
            doctest::Approx(alpha * attacker_utility(g, x, y1, j) +
                            (1 - alpha) * attacker_utility(g, x, y2, j)));
      // BR dominance.
      const auto br = best_response_set(g, x, j);
      Vector on_br = Vector::Zero(K);
      on_br(br.front()) = g.attacker_budget();
      CHECK(attacker_utility(g, x, on_br, j) >= attacker_utility(g, x, y2, j) - 1e-9);
    }

    // Positive scaling of one type's tables keeps its BR set.
    auto raw = g.to_raw();
    for (auto& v : raw.attacker_covered_payoff[0]) v *= 3.5;
    for (auto& v : raw.attacker_uncovered_payoff[0]) v *= 3.5;
    const auto scaled = validate_instance(raw);
    CHECK(best_response_set(scaled, x, 0) == best_response_set(g, x, 0));
  }
}

TEST_CASE("type distributions") {
  const TypeDistribution p(V({0.2, 0.3, 0.5}));
  const TypeDistribution q(V({0.3, 0.3, 0.4}));
  CHECK(p.l1_distance(q) == doctest::Approx(0.2));
  CHECK_FALSE(p.is_uniform());
  CHECK(TypeDistribution(V({0.5, 0.5})).is_uniform());
  CHECK(TypeDistribution(V({0, 1, 0})).one_point_type() == 1);
  CHECK(p.one_point_type() == -1);
}
