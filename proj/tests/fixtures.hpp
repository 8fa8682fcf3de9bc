#pragma once

// Hand-built instances shared by the unit tests.

#include <vector>

#include "mtdhg/harness.hpp"
#include "mtdhg/model.hpp"

namespace fixture {

using mtdhg::RawInstance;

inline RawInstance minimal_raw() {
  RawInstance raw;
  raw.num_targets = 1;
  raw.num_types = 1;
  raw.defender_budget = 1;
  raw.attacker_budget = 1;
  raw.type_probabilities = {1};
  raw.defender_covered_payoff = {1};
  raw.defender_uncovered_payoff = {0};
  raw.attacker_covered_payoff = {{0}};
  raw.attacker_uncovered_payoff = {{1}};
  return raw;
}

// K=2, n=1, unit budgets, symmetric unit payoffs.
inline RawInstance i2_raw() {
  RawInstance raw;
  raw.num_targets = 2;
  raw.num_types = 1;
  raw.defender_budget = 1;
  raw.attacker_budget = 1;
  raw.type_probabilities = {1};
  raw.defender_covered_payoff = {1, 1};
  raw.defender_uncovered_payoff = {0, 0};
  raw.attacker_covered_payoff = {{0, 0}};
  raw.attacker_uncovered_payoff = {{1, 1}};
  return raw;
}

inline mtdhg::GameInstance i2() { return mtdhg::validate_instance(i2_raw()); }

// I2 with a second identical type.
inline mtdhg::GameInstance i2_two_types(double p0 = 0.5) {
  RawInstance raw = i2_raw();
  raw.num_types = 2;
  raw.type_probabilities = {p0, 1 - p0};
  raw.attacker_covered_payoff.push_back(raw.attacker_covered_payoff[0]);
  raw.attacker_uncovered_payoff.push_back(raw.attacker_uncovered_payoff[0]);
  return mtdhg::validate_instance(raw);
}

inline mtdhg::GameInstance random_game(std::uint64_t seed, int n, int K,
                                       const mtdhg::harness::ExperimentConfig& cfg = {}) {
  return mtdhg::harness::generate_instance(seed, n, K, cfg).game;
}

// Copy of `game` whose every type carries type 0's attacker tables.
inline mtdhg::GameInstance identical_types(const mtdhg::GameInstance& game) {
  RawInstance raw = game.to_raw();
  for (auto& row : raw.attacker_covered_payoff) row = raw.attacker_covered_payoff[0];
  for (auto& row : raw.attacker_uncovered_payoff) row = raw.attacker_uncovered_payoff[0];
  return mtdhg::validate_instance(raw);
}

inline mtdhg::harness::ExperimentConfig unit_budget_config() {
  mtdhg::harness::ExperimentConfig cfg;
  cfg.budget = {1, 1};
  return cfg;
}

}  // namespace fixture
