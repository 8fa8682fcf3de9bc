#include "mtdhg/model.hpp"

#include <cmath>
#include <sstream>

namespace mtdhg {

namespace {

std::string Format(double value) {
  std::ostringstream os;
  os.precision(12);
  os << value;
  return os.str();
}

bool AllFinite(const std::vector<double>& values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

GameInstance validate_instance(const RawInstance& raw) {
  std::vector<Violation> violations;
  auto shape = [&](std::string message) {
    violations.push_back({"ShapeError", std::move(message)});
  };

  const std::int64_t K = raw.num_targets;
  const std::int64_t n = raw.num_types;
  if (K < 1) shape("K must be a positive integer, got " + std::to_string(K));
  if (n < 1) shape("n must be a positive integer, got " + std::to_string(n));
  if (!(raw.defender_budget > 0) || !std::isfinite(raw.defender_budget)) {
    shape("R_d must be a finite positive number, got " + Format(raw.defender_budget));
  }
  if (!(raw.attacker_budget > 0) || !std::isfinite(raw.attacker_budget)) {
    shape("R_a must be a finite positive number, got " + Format(raw.attacker_budget));
  }
  if (n >= 1 && (raw.true_type_index < 0 || raw.true_type_index >= n)) {
    shape("theta0 = " + std::to_string(raw.true_type_index) +
          " is not a valid type index for n = " + std::to_string(n));
  }

  auto check_length = [&](const std::vector<double>& v, std::int64_t expected,
                          const char* name) {
    if (static_cast<std::int64_t>(v.size()) != expected) {
      shape(std::string(name) + " has length " + std::to_string(v.size()) +
            ", expected " + std::to_string(expected));
      return false;
    }
    if (!AllFinite(v)) {
      shape(std::string(name) + " contains a non-finite value");
      return false;
    }
    return true;
  };
  auto check_table = [&](const std::vector<std::vector<double>>& t,
                         const char* name) {
    if (static_cast<std::int64_t>(t.size()) != n) {
      shape(std::string(name) + " has " + std::to_string(t.size()) +
            " rows, expected " + std::to_string(n));
      return false;
    }
    bool ok = true;
    for (std::size_t j = 0; j < t.size(); ++j) {
      ok &= check_length(t[j], K,
                         (std::string(name) + "[" + std::to_string(j) + "]").c_str());
    }
    return ok;
  };

  const bool dims_ok = K >= 1 && n >= 1;
  const bool p_ok = dims_ok && check_length(raw.type_probabilities, n, "P");
  const bool ddc_ok = dims_ok && check_length(raw.defender_covered_payoff, K, "U_d_c");
  const bool ddu_ok = dims_ok && check_length(raw.defender_uncovered_payoff, K, "U_d_u");
  const bool ac_ok = dims_ok && check_table(raw.attacker_covered_payoff, "U_a_c");
  const bool au_ok = dims_ok && check_table(raw.attacker_uncovered_payoff, "U_a_u");

  if (p_ok) {
    double mass = 0;
    for (std::size_t j = 0; j < raw.type_probabilities.size(); ++j) {
      const double p = raw.type_probabilities[j];
      if (p < 0) {
        violations.push_back({"ProbabilityError", "P[" + std::to_string(j) +
                                                      "] = " + Format(p) +
                                                      " is negative"});
      }
      mass += p;
    }
    if (std::abs(mass - 1.0) > kSimplexTol) {
      violations.push_back(
          {"ProbabilityError", "P sums to " + Format(mass) + ", expected 1"});
    }
  }
  if (ddc_ok && ddu_ok) {
    for (std::int64_t k = 0; k < K; ++k) {
      const double gain = raw.defender_covered_payoff[static_cast<std::size_t>(k)] -
                          raw.defender_uncovered_payoff[static_cast<std::size_t>(k)];
      if (!(gain > 0)) {
        violations.push_back({"AssumptionViolation",
                              "defender gain U_d_c - U_d_u at target " +
                                  std::to_string(k) + " is " + Format(gain) +
                                  ", must be > 0"});
      }
    }
  }
  if (ac_ok && au_ok) {
    for (std::int64_t j = 0; j < n; ++j) {
      for (std::int64_t k = 0; k < K; ++k) {
        const auto uj = static_cast<std::size_t>(j);
        const auto uk = static_cast<std::size_t>(k);
        const double gain = raw.attacker_uncovered_payoff[uj][uk] -
                            raw.attacker_covered_payoff[uj][uk];
        if (!(gain > 0)) {
          violations.push_back({"AssumptionViolation",
                                "attacker gain U_a_u - U_a_c at (type " +
                                    std::to_string(j) + ", target " +
                                    std::to_string(k) + ") is " + Format(gain) +
                                    ", must be > 0"});
        }
      }
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));

  GameInstance game;
  game.defender_budget_ = raw.defender_budget;
  game.attacker_budget_ = raw.attacker_budget;
  game.true_type_ = raw.true_type_index;
  game.probabilities_ = Eigen::Map<const Vector>(raw.type_probabilities.data(), n);
  game.defender_covered_ = Eigen::Map<const Vector>(raw.defender_covered_payoff.data(), K);
  game.defender_uncovered_ =
      Eigen::Map<const Vector>(raw.defender_uncovered_payoff.data(), K);
  game.attacker_covered_.resize(n, K);
  game.attacker_uncovered_.resize(n, K);
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < K; ++k) {
      game.attacker_covered_(j, k) =
          raw.attacker_covered_payoff[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      game.attacker_uncovered_(j, k) =
          raw.attacker_uncovered_payoff[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    }
  }
  game.defender_gain_ = game.defender_covered_ - game.defender_uncovered_;
  game.attacker_gain_ = game.attacker_uncovered_ - game.attacker_covered_;
  return game;
}

GameInstance GameInstance::with_probabilities(const Vector& probabilities) const {
  RawInstance raw = to_raw();
  raw.type_probabilities.assign(probabilities.data(),
                                probabilities.data() + probabilities.size());
  return validate_instance(raw);
}

RawInstance GameInstance::to_raw() const {
  RawInstance raw;
  raw.num_targets = num_targets();
  raw.num_types = num_types();
  raw.defender_budget = defender_budget_;
  raw.attacker_budget = attacker_budget_;
  raw.true_type_index = true_type_;
  raw.type_probabilities.assign(probabilities_.data(),
                                probabilities_.data() + probabilities_.size());
  raw.defender_covered_payoff.assign(defender_covered_.data(),
                                     defender_covered_.data() + defender_covered_.size());
  raw.defender_uncovered_payoff.assign(
      defender_uncovered_.data(), defender_uncovered_.data() + defender_uncovered_.size());
  for (Index j = 0; j < num_types(); ++j) {
    std::vector<double> covered(static_cast<std::size_t>(num_targets()));
    std::vector<double> uncovered(static_cast<std::size_t>(num_targets()));
    for (Index k = 0; k < num_targets(); ++k) {
      covered[static_cast<std::size_t>(k)] = attacker_covered_(j, k);
      uncovered[static_cast<std::size_t>(k)] = attacker_uncovered_(j, k);
    }
    raw.attacker_covered_payoff.push_back(std::move(covered));
    raw.attacker_uncovered_payoff.push_back(std::move(uncovered));
  }
  return raw;
}

DefenderStrategy::DefenderStrategy(Vector allocation, double budget)
    : allocation_(std::move(allocation)) {
  if (allocation_.size() == 0 || !allocation_.allFinite()) {
    throw ShapeError("defender allocation must be a non-empty finite vector");
  }
  if (allocation_.minCoeff() < -kSimplexTol) {
    throw ShapeError("defender allocation has a negative entry");
  }
  if (std::abs(allocation_.sum() - budget) > kSimplexTol) {
    throw ShapeError("defender allocation sums to " + Format(allocation_.sum()) +
                     ", expected R_d = " + Format(budget));
  }
}

AttackerPolicy::AttackerPolicy(Matrix allocation, double budget)
    : allocation_(std::move(allocation)) {
  if (allocation_.size() == 0 || !allocation_.allFinite()) {
    throw ShapeError("attacker policy must be a non-empty finite matrix");
  }
  if (allocation_.minCoeff() < -kSimplexTol) {
    throw ShapeError("attacker policy has a negative entry");
  }
  for (Index j = 0; j < allocation_.rows(); ++j) {
    const double sum = allocation_.row(j).sum();
    if (std::abs(sum - budget) > kSimplexTol) {
      throw ShapeError("attacker row " + std::to_string(j) + " sums to " +
                       Format(sum) + ", expected R_a = " + Format(budget));
    }
  }
}

Vector AttackerPolicy::stacked() const {
  Vector out(allocation_.size());
  Index i = 0;
  for (Index j = 0; j < allocation_.rows(); ++j) {
    for (Index k = 0; k < allocation_.cols(); ++k) out(i++) = allocation_(j, k);
  }
  return out;
}

TypeDistribution::TypeDistribution(Vector probabilities)
    : probabilities_(std::move(probabilities)) {
  if (probabilities_.size() == 0 || !probabilities_.allFinite()) {
    throw ProbabilityError("type distribution must be a non-empty finite vector");
  }
  if (probabilities_.minCoeff() < 0) {
    throw ProbabilityError("type distribution has a negative entry");
  }
  if (std::abs(probabilities_.sum() - 1.0) > kSimplexTol) {
    throw ProbabilityError("type distribution sums to " +
                           Format(probabilities_.sum()) + ", expected 1");
  }
}

double TypeDistribution::l1_distance(const TypeDistribution& other) const {
  if (other.size() != size()) throw ShapeError("distribution length mismatch");
  return (probabilities_ - other.probabilities_).cwiseAbs().sum();
}

bool TypeDistribution::is_uniform(double tol) const {
  const double target = 1.0 / static_cast<double>(size());
  return (probabilities_.array() - target).abs().maxCoeff() <= tol;
}

Index TypeDistribution::one_point_type(double tol) const {
  for (Index j = 0; j < size(); ++j) {
    if (std::abs(probabilities_(j) - 1.0) <= tol) return j;
  }
  return -1;
}

TargetSet support_of(const Eigen::Ref<const Vector>& v, double threshold) {
  TargetSet out;
  for (Index k = 0; k < v.size(); ++k) {
    if (v(k) > threshold) out.push_back(k);
  }
  return out;
}

Vector defense_values(const GameInstance& game, const Eigen::Ref<const Vector>& x) {
  const double R_d = game.defender_budget();
  return x.cwiseProduct(game.defender_covered_payoff()) +
         (R_d - x.array()).matrix().cwiseProduct(game.defender_uncovered_payoff());
}

Vector attack_values(const GameInstance& game, const Eigen::Ref<const Vector>& x,
                     Index type) {
  if (type < 0 || type >= game.num_types()) {
    throw ShapeError("type index " + std::to_string(type) + " out of range");
  }
  const double R_d = game.defender_budget();
  const Vector covered = game.attacker_covered_payoff().row(type).transpose();
  const Vector uncovered = game.attacker_uncovered_payoff().row(type).transpose();
  return x.cwiseProduct(covered) + (R_d - x.array()).matrix().cwiseProduct(uncovered);
}

double defender_utility(const GameInstance& game, const Eigen::Ref<const Vector>& x,
                        const Eigen::Ref<const Vector>& y_row) {
  return y_row.dot(defense_values(game, x));
}

double attacker_utility(const GameInstance& game, const Eigen::Ref<const Vector>& x,
                        const Eigen::Ref<const Vector>& y_row, Index type) {
  return y_row.dot(attack_values(game, x, type));
}

double expected_defender_utility(const GameInstance& game,
                                 const Eigen::Ref<const Vector>& x,
                                 const Eigen::Ref<const Matrix>& y,
                                 const TypeDistribution& dist) {
  if (y.rows() != dist.size() || y.cols() != x.size()) {
    throw ShapeError("attacker policy shape does not match game");
  }
  const Vector values = defense_values(game, x);
  double total = 0;
  for (Index j = 0; j < y.rows(); ++j) total += dist[j] * y.row(j).dot(values);
  return total;
}

TargetSet best_response_set(const GameInstance& game,
                            const Eigen::Ref<const Vector>& x, Index type,
                            double tie_tol) {
  const Vector values = attack_values(game, x, type);
  const double best = values.maxCoeff();
  const double cutoff = best - tie_tol * (1 + std::abs(best));
  TargetSet out;
  for (Index k = 0; k < values.size(); ++k) {
    if (values(k) >= cutoff) out.push_back(k);
  }
  return out;
}

LinearForm defender_coefficients(const GameInstance& game,
                                 const Eigen::Ref<const Matrix>& y,
                                 const TypeDistribution& dist) {
  if (y.rows() != dist.size() || y.cols() != game.num_targets()) {
    throw ShapeError("attacker policy shape does not match game");
  }
  const Vector aggregate = y.transpose() * dist.probabilities();
  LinearForm form;
  form.coefficients = game.defender_gain().cwiseProduct(aggregate);
  form.constant =
      game.defender_budget() * game.defender_uncovered_payoff().dot(aggregate);
  return form;
}

}  // namespace mtdhg
