#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "mtdhg/robustness.hpp"
#include "oracles.hpp"

using namespace mtdhg;

namespace {

Vector V(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// Two types, two targets, unit budgets. At x = (0.5, 0.5) type 0 strictly
// prefers target 0 and type 1 is indifferent; ΔU_d = (1, 2).
GameInstance Threshold(double p0) {
  RawInstance raw;
  raw.num_targets = 2;
  raw.num_types = 2;
  raw.defender_budget = 1;
  raw.attacker_budget = 1;
  raw.type_probabilities = {p0, 1 - p0};
  raw.defender_covered_payoff = {1, 2};
  raw.defender_uncovered_payoff = {0, 0};
  raw.attacker_covered_payoff = {{0, 0}, {0, 0}};
  raw.attacker_uncovered_payoff = {{3, 1}, {1, 1}};
  return validate_instance(raw);
}

// Scans each type's best-response simplex at step R_a/50 and returns the
// smallest violation of "d' constant on supp(x) and maximal there".
double GridViolation(const GameInstance& g, const Vector& x, const Vector& p_prime) {
  const auto support = support_of(x);
  const double Ra = g.attacker_budget();
  const Vector dud = g.defender_gain();
  std::vector<std::vector<Vector>> options(2);
  for (Index j = 0; j < 2; ++j) {
    const auto br = best_response_set(g, x, j);
    if (br.size() == 1) {
      Vector y = Vector::Zero(2);
      y(br[0]) = Ra;
      options[static_cast<std::size_t>(j)].push_back(y);
    } else {
      for (int a = 0; a <= 50; ++a) options[static_cast<std::size_t>(j)].push_back(V({Ra * a / 50, Ra * (50 - a) / 50}));
    }
  }
  double best = 1e18;
  for (const auto& y0 : options[0]) {
    for (const auto& y1 : options[1]) {
      const Vector d = dud.cwiseProduct(p_prime(0) * y0 + p_prime(1) * y1);
      double lo = 1e18, hi = -1e18, outside = -1e18;
      for (Index k = 0; k < 2; ++k) {
        const bool in = std::find(support.begin(), support.end(), k) != support.end();
        if (in) {
          lo = std::min(lo, d(k));
          hi = std::max(hi, d(k));
        } else {
          outside = std::max(outside, d(k));
        }
      }
      best = std::min(best, std::max({hi - lo, outside - lo, 0.0}));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("robust at the base distribution") {
  for (int i = 0; i < 30; ++i) {
    const auto g = fixture::random_game(3000 + i, 1 + i % 3, 2 + i % 3);
    const auto r = solve_hbne(g);
    const auto rep = check_robust(g, r.defender_strategy, distribution_of(g));
    CAPTURE(i);
    CHECK(rep.is_robust);
    CHECK(rep.perturbation_l1 == 0);
  }
}

TEST_CASE("identical types are robust to any belief") {
  std::mt19937_64 rng(8);
  std::exponential_distribution<double> e(1.0);
  for (int i = 0; i < 10; ++i) {
    const auto g = fixture::identical_types(fixture::random_game(3100 + i, 3, 3));
    const auto x = solve_hbne(g).defender_strategy;
    for (int s = 0; s < 5; ++s) {
      Vector p = Vector::NullaryExpr(3, [&] { return e(rng); });
      CHECK(check_robust(g, x, TypeDistribution(p / p.sum())).is_robust);
    }
  }
}

TEST_CASE("threshold oracle") {
  const auto g = Threshold(0.2);
  const DefenderStrategy x(V({0.5, 0.5}), 1.0);
  const double t = oracle::two_by_two_threshold(g);
  CHECK(t == doctest::Approx(2.0 / 3));
  for (int i = 0; i <= 40; ++i) {
    const double q = i / 40.0;
    if (std::abs(q - t) < 1e-3) continue;
    CAPTURE(q);
    CHECK(check_robust(g, x, TypeDistribution(V({q, 1 - q}))).is_robust == (q < t));
  }
}

TEST_CASE("grid oracle on two-by-two games") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  int robust = 0, fragile = 0;
  for (int i = 0; i < 20; ++i) {
    const auto g = fixture::random_game(3200 + i, 2, 2);
    const auto x = solve_hbne(g).defender_strategy;
    const double tol = 2 * g.defender_gain().maxCoeff() * g.attacker_budget() / 50;
    for (int s = 0; s < 20; ++s) {
      const double q = u(rng);
      const Vector p = V({q, 1 - q});
      const bool lp = check_robust(g, x, TypeDistribution(p)).is_robust;
      const double violation = GridViolation(g, x.allocation(), p);
      CAPTURE(i);
      CAPTURE(q);
      CAPTURE(violation);
      if (lp) CHECK(violation <= tol);
      if (violation <= 1e-12) CHECK(lp);
      (lp ? robust : fragile)++;
    }
  }
  CHECK(robust > 0);
  CHECK(fragile > 0);
}

TEST_CASE("robustness witness is a best-response completion") {
  for (int i = 0; i < 20; ++i) {
    const auto g = fixture::random_game(3300 + i, 2, 3);
    const auto x = solve_hbne(g).defender_strategy;
    const TypeDistribution p(V({0.5, 0.5}));
    const auto rep = check_robust(g, x, p);
    if (!rep.is_robust) continue;
    REQUIRE(rep.witness_policy);
    const Matrix& y = rep.witness_policy->allocation();
    for (Index j = 0; j < 2; ++j) {
      const auto br = best_response_set(g, x.allocation(), j);
      for (Index k = 0; k < 3; ++k) {
        if (std::find(br.begin(), br.end(), k) == br.end()) CHECK(y(j, k) <= 1e-7);
      }
    }
    const auto v = verify_equilibrium(g, x.allocation(), y, p, 1e-6);
    CHECK(v.defender_best_response());
  }
}

TEST_CASE("mismatched shapes") {
  const auto g = fixture::random_game(1, 2, 3);
  const auto x = solve_hbne(g).defender_strategy;
  CHECK_THROWS_AS(check_robust(g, x, TypeDistribution(V({0.2, 0.3, 0.5}))), ShapeError);
}

TEST_CASE("radius: identical types reach the simplex boundary") {
  const auto g = fixture::identical_types(fixture::random_game(3400, 3, 3));
  const auto x = solve_hbne(g).defender_strategy;
  RadiusOptions opts;
  opts.direction_samples = 8;
  const auto est = robustness_radius(g, x, distribution_of(g), opts);
  CHECK(est.radius == doctest::Approx(est.max_reachable));
  CHECK(est.directions_evaluated == 3 + 8);
}

TEST_CASE("radius: two-type threshold") {
  // Only the direction toward θ_0 breaks robustness, at P(θ_0) = 2/3, an L1
  // distance of 2 * (2/3 - 0.2).
  const auto g = Threshold(0.2);
  const DefenderStrategy x(V({0.5, 0.5}), 1.0);
  const auto est = robustness_radius(g, x, distribution_of(g));
  CHECK(std::abs(est.radius - 2 * (2.0 / 3 - 0.2)) <= 2e-4);
  CHECK(est.max_reachable == doctest::Approx(1.6));

  // Points just inside the radius along the failing direction stay robust.
  const double inside = (est.radius - est.bisection_tolerance) / 2;
  CHECK(check_robust(g, x, TypeDistribution(V({0.2 + inside, 0.8 - inside}))).is_robust);
}

TEST_CASE("radius: sound along evaluated vertex directions") {
  for (int i = 0; i < 5; ++i) {
    const auto g = fixture::random_game(3500 + i, 3, 3);
    const auto x = solve_hbne(g).defender_strategy;
    RadiusOptions opts;
    opts.direction_samples = 4;
    const auto est = robustness_radius(g, x, distribution_of(g), opts);
    const Vector base = g.type_probabilities();
    for (Index j = 0; j < 3; ++j) {
      const Vector u = Vector::Unit(3, j) - base;
      const double len = u.cwiseAbs().sum();
      const double s = std::min(len, std::max(0.0, est.radius - opts.bisection_tolerance));
      // Scan points are multiples of scan_step, so check the points that
      // were actually visited inside the radius.
      for (double t = opts.scan_step; t < s; t += opts.scan_step) {
        const Vector p = base + u * (t / len);
        CHECK(check_robust(g, x, TypeDistribution(p)).is_robust);
      }
    }
  }
}

TEST_CASE("radius: not robust at base") {
  const auto g = Threshold(0.9);
  const DefenderStrategy x(V({0.5, 0.5}), 1.0);
  CHECK_THROWS_AS(robustness_radius(g, x, distribution_of(g)), NotRobustAtBase);
}

TEST_CASE("sweep: lattice layout and identical types") {
  const auto g = fixture::identical_types(
      harness::generate_fig2_template(17, 3, harness::ExperimentConfig{}).game);
  const auto sweep = simplex_grid_sweep(g, 0.5);
  CHECK(sweep.divisions == 2);
  REQUIRE(sweep.points.size() == 6);
  CHECK(sweep.locally_robust_fraction == 1.0);
  std::set<std::string> keys;
  for (const auto& p : sweep.points) {
    CHECK(p.solved);
    CHECK(p.p1 + p.p2 + p.p3 == doctest::Approx(1));
    keys.insert(p.color_key);
  }
  CHECK(keys.size() == 1);
}

TEST_CASE("sweep: vertices match the single-type game") {
  const auto g = harness::generate_fig2_template(23, 3, harness::ExperimentConfig{}).game;
  const auto sweep = simplex_grid_sweep(g, 0.25);
  for (const auto& p : sweep.points) {
    int type = -1;
    if (p.p1 == 1) type = 0;
    if (p.p2 == 1) type = 1;
    if (p.p3 == 1) type = 2;
    if (type < 0) continue;
    auto raw = g.to_raw();
    raw.num_types = 1;
    raw.type_probabilities = {1};
    raw.attacker_covered_payoff = {raw.attacker_covered_payoff[static_cast<std::size_t>(type)]};
    raw.attacker_uncovered_payoff = {raw.attacker_uncovered_payoff[static_cast<std::size_t>(type)]};
    raw.true_type_index = 0;
    const auto single = solve_hbne(validate_instance(raw));
    CAPTURE(type);
    CHECK((p.x - single.defender_strategy.allocation()).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("sweep: deterministic across thread counts") {
  const auto g = harness::generate_fig2_template(29, 3, harness::ExperimentConfig{}).game;
  const auto a = simplex_grid_sweep(g, 0.1, {}, 1);
  const auto b = simplex_grid_sweep(g, 0.1, {}, 3);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].color_key == b.points[i].color_key);
    CHECK(a.points[i].locally_robust == b.points[i].locally_robust);
  }
  CHECK(a.locally_robust_fraction == b.locally_robust_fraction);
}

TEST_CASE("sweep: preconditions") {
  const auto g = fixture::random_game(3, 2, 3);
  CHECK_THROWS_AS(simplex_grid_sweep(g, 0.5), PreconditionViolated);
  const auto t = harness::generate_fig2_template(3, 3, harness::ExperimentConfig{}).game;
  CHECK_THROWS_AS(simplex_grid_sweep(t, 0.3), PreconditionViolated);
}

TEST_CASE("color keys") {
  CHECK(strategy_color_key(V({0.5, 0.5})) == strategy_color_key(V({0.5001, 0.4999})));
  CHECK(strategy_color_key(V({0.5, 0.5})) != strategy_color_key(V({0.6, 0.4})));
  CHECK(strategy_color_key(V({0.5, 0.5})).size() == 16);
}
