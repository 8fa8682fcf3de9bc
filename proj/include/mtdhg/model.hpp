#pragma once

// Game data model for moving-target-defense games with typed attackers.
//
// K targets share a defender budget R_d and an attacker budget R_a. The
// defender allocates x (sum R_d), an attacker of type j allocates y(j) (sum
// R_a). Payoffs are per unit of attack: covering resources earn the covered
// payoff, the remaining R_d - x^k earn the uncovered payoff.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mtdhg/errors.hpp"

namespace mtdhg {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using TargetSet = std::vector<Index>;

inline constexpr double kSimplexTol = 1e-9;
inline constexpr double kSupportThreshold = 1e-9;
inline constexpr double kDefaultTieTol = 1e-9;

// Unvalidated instance data as it comes out of a parser or generator.
struct RawInstance {
  std::int64_t num_targets = 0;
  std::int64_t num_types = 0;
  double defender_budget = 0;
  double attacker_budget = 0;
  std::int64_t true_type_index = 0;
  std::vector<double> type_probabilities;
  std::vector<double> defender_covered_payoff;
  std::vector<double> defender_uncovered_payoff;
  std::vector<std::vector<double>> attacker_covered_payoff;    // n rows of K
  std::vector<std::vector<double>> attacker_uncovered_payoff;  // n rows of K
};

class GameInstance;

// Checks shapes, probability mass and both directions of the payoff
// dominance assumption. Throws ValidationError listing every violation.
GameInstance validate_instance(const RawInstance& raw);

class GameInstance {
 public:
  Index num_targets() const { return defender_covered_.size(); }
  Index num_types() const { return probabilities_.size(); }
  double defender_budget() const { return defender_budget_; }
  double attacker_budget() const { return attacker_budget_; }
  Index true_type_index() const { return true_type_; }
  const Vector& type_probabilities() const { return probabilities_; }
  const Vector& defender_covered_payoff() const { return defender_covered_; }
  const Vector& defender_uncovered_payoff() const { return defender_uncovered_; }
  const Matrix& attacker_covered_payoff() const { return attacker_covered_; }
  const Matrix& attacker_uncovered_payoff() const { return attacker_uncovered_; }

  // U_d^c - U_d^u, length K, strictly positive.
  const Vector& defender_gain() const { return defender_gain_; }
  // U_a^u - U_a^c, n x K, strictly positive.
  const Matrix& attacker_gain() const { return attacker_gain_; }

  // Same game with the type distribution replaced by `probabilities`.
  GameInstance with_probabilities(const Vector& probabilities) const;

  RawInstance to_raw() const;

 private:
  friend GameInstance validate_instance(const RawInstance& raw);
  GameInstance() = default;

  double defender_budget_ = 0;
  double attacker_budget_ = 0;
  Index true_type_ = 0;
  Vector probabilities_;
  Vector defender_covered_;
  Vector defender_uncovered_;
  Matrix attacker_covered_;
  Matrix attacker_uncovered_;
  Vector defender_gain_;
  Matrix attacker_gain_;
};

class DefenderStrategy {
 public:
  // Throws ShapeError on a non-finite or negative entry, or a sum other
  // than `budget` (to kSimplexTol).
  DefenderStrategy(Vector allocation, double budget);
  DefenderStrategy(const GameInstance& game, Vector allocation)
      : DefenderStrategy(std::move(allocation), game.defender_budget()) {}

  const Vector& allocation() const { return allocation_; }
  Index size() const { return allocation_.size(); }
  double operator[](Index k) const { return allocation_(k); }

 private:
  Vector allocation_;
};

class AttackerPolicy {
 public:
  // Rows are per-type allocations, each summing to `budget`.
  AttackerPolicy(Matrix allocation, double budget);
  AttackerPolicy(const GameInstance& game, Matrix allocation)
      : AttackerPolicy(std::move(allocation), game.attacker_budget()) {}

  const Matrix& allocation() const { return allocation_; }
  Index num_types() const { return allocation_.rows(); }
  Index num_targets() const { return allocation_.cols(); }
  auto row(Index type) const { return allocation_.row(type); }

  // Row-major flattening y(θ_1), ..., y(θ_n); the nK-vector used by the
  // linear-system stability tests.
  Vector stacked() const;

 private:
  Matrix allocation_;
};

class TypeDistribution {
 public:
  // Throws ProbabilityError on negative entries or mass other than 1.
  explicit TypeDistribution(Vector probabilities);

  const Vector& probabilities() const { return probabilities_; }
  Index size() const { return probabilities_.size(); }
  double operator[](Index j) const { return probabilities_(j); }

  double l1_distance(const TypeDistribution& other) const;
  bool is_uniform(double tol = kSimplexTol) const;
  // Index of the type with all mass, or -1.
  Index one_point_type(double tol = kSimplexTol) const;

 private:
  Vector probabilities_;
};

inline TypeDistribution distribution_of(const GameInstance& game) {
  return TypeDistribution(game.type_probabilities());
}

// Strictly positive coordinates of `v` (threshold kSupportThreshold).
TargetSet support_of(const Eigen::Ref<const Vector>& v,
                     double threshold = kSupportThreshold);

// Per-target defender payoff per attack unit: x^k U_d^c + (R_d - x^k) U_d^u.
Vector defense_values(const GameInstance& game, const Eigen::Ref<const Vector>& x);

// Per-target attacker payoff per attack unit for `type`:
// x^k U_a^c + (R_d - x^k) U_a^u. Its inner product with a row y(θ) is the
// typed attacker utility.
Vector attack_values(const GameInstance& game, const Eigen::Ref<const Vector>& x,
                     Index type);

double defender_utility(const GameInstance& game, const Eigen::Ref<const Vector>& x,
                        const Eigen::Ref<const Vector>& y_row);

double attacker_utility(const GameInstance& game, const Eigen::Ref<const Vector>& x,
                        const Eigen::Ref<const Vector>& y_row, Index type);

// sum_θ P(θ) U_d(x, y(θ)); `y` is n x K.
double expected_defender_utility(const GameInstance& game,
                                 const Eigen::Ref<const Vector>& x,
                                 const Eigen::Ref<const Matrix>& y,
                                 const TypeDistribution& dist);

// Targets whose attack value is within tie_tol * (1 + |max|) of the maximum.
// The best-response set of the type is the face of the attacker simplex
// spanned by these targets.
TargetSet best_response_set(const GameInstance& game,
                            const Eigen::Ref<const Vector>& x, Index type,
                            double tie_tol = kDefaultTieTol);

// EU_d(x, y) written as coefficients . x + constant.
struct LinearForm {
  Vector coefficients;
  double constant = 0;
};

// d_k = ΔU_d(t_k) sum_θ P(θ) y^k(θ), constant = R_d sum_k U_d^u(t_k) sum_θ P(θ) y^k(θ).
LinearForm defender_coefficients(const GameInstance& game,
                                 const Eigen::Ref<const Matrix>& y,
                                 const TypeDistribution& dist);

}  // namespace mtdhg
