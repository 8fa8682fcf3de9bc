#include "mtdhg/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "constraints.hpp"
#include "mtdhg/format.hpp"
#include "mtdhg/numerics/simplex.hpp"
#include "mtdhg/parallel.hpp"

namespace mtdhg {

namespace {

double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Point of the probability simplex at L1 distance `s` from `base` along the
// unit-L1 direction `u`, with round-off below zero removed.
Vector PointOnRay(const Vector& base, const Vector& u, double s) {
  Vector p = (base + s * u).cwiseMax(0.0);
  return p / p.sum();
}

double RayLength(const Vector& base, const Vector& u) {
  double limit = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < u.size(); ++j) {
    if (u(j) < -1e-15) limit = std::min(limit, base(j) / -u(j));
  }
  return limit;
}

std::uint64_t Fnv1a(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace

RobustnessReport check_robust(const GameInstance& game, const DefenderStrategy& x_star,
                              const TypeDistribution& p_prime, double tie_tol,
                              const numerics::NumericsConfig& numerics) {
  const Index K = game.num_targets();
  const Index n = game.num_types();
  if (x_star.size() != K || p_prime.size() != n) {
    throw ShapeError("strategy or distribution does not match the game");
  }
  RobustnessReport report;
  report.tie_tol = tie_tol;
  report.perturbation_l1 = p_prime.l1_distance(distribution_of(game));

  const TargetSet support = support_of(x_star.allocation());
  std::vector<bool> keep(static_cast<std::size_t>(n * K), false);
  for (Index j = 0; j < n; ++j) {
    const TargetSet br = best_response_set(game, x_star.allocation(), j, tie_tol);
    for (Index k : br) keep[static_cast<std::size_t>(j * K + k)] = true;
    if (br.size() > 1) {
      std::string note = "type " + std::to_string(j) + " indifferent among targets {";
      for (std::size_t i = 0; i < br.size(); ++i) {
        note += (i ? "," : "") + std::to_string(br[i]);
      }
      report.notes.push_back(note + "}");
    }
  }

  detail::Lp lp(n * K);
  detail::add_attacker_budgets(lp, game, 0);
  detail::add_coefficient_tie_set(lp, game, p_prime.probabilities(), support, 0);
  const auto witness = numerics::solve_feasibility(detail::keep_columns(lp, keep), numerics);
  if (!witness) return report;

  Matrix y = detail::unstack(detail::expand_columns(*witness, keep), n, K).cwiseMax(0.0);
  for (Index j = 0; j < n; ++j) y.row(j) *= game.attacker_budget() / y.row(j).sum();
  report.is_robust = true;
  report.witness_policy.emplace(game, std::move(y));
  return report;
}

RadiusEstimate robustness_radius(const GameInstance& game, const DefenderStrategy& x_star,
                                 const TypeDistribution& p_base,
                                 const RadiusOptions& opts) {
  RadiusEstimate estimate;
  estimate.direction_samples = opts.direction_samples;
  estimate.bisection_tolerance = opts.bisection_tolerance;

  auto robust_at = [&](const Vector& p) {
    ++estimate.robustness_checks;
    return check_robust(game, x_star, TypeDistribution(p), opts.tie_tol, opts.numerics)
        .is_robust;
  };
  if (!robust_at(p_base.probabilities())) {
    throw NotRobustAtBase("strategy is not a robust HBNE strategy at the base distribution");
  }

  const Vector& base = p_base.probabilities();
  const Index n = base.size();
  estimate.max_reachable = 2 * (1 - base.minCoeff());

  std::vector<Vector> targets;
  for (Index j = 0; j < n; ++j) targets.push_back(Vector::Unit(n, j));
  std::mt19937_64 rng(opts.seed);
  for (int s = 0; s < opts.direction_samples; ++s) {
    Vector q(n);
    for (Index j = 0; j < n; ++j) q(j) = -std::log(1.0 - Uniform01(rng));
    targets.push_back(q / q.sum());
  }

  double radius = estimate.max_reachable;
  for (const Vector& target : targets) {
    const Vector delta = target - base;
    const double length = delta.cwiseAbs().sum();
    if (length < 1e-12) continue;
    ++estimate.directions_evaluated;
    const Vector u = delta / length;
    const double ray = std::min(RayLength(base, u), estimate.max_reachable);

    // Robustness along a ray need not be monotone in general, so scan forward
    // for the first failure and refine only that bracket.
    double robust_so_far = 0;
    double failed_at = -1;
    for (double s = opts.scan_step;; s += opts.scan_step) {
      const double at = std::min(s, ray);
      if (at >= radius) break;  // cannot lower the running minimum
      if (!robust_at(PointOnRay(base, u, at))) {
        failed_at = at;
        break;
      }
      robust_so_far = at;
      if (at >= ray) break;
    }
    if (failed_at < 0) continue;
    double lo = robust_so_far;
    double hi = failed_at;
    while (hi - lo > opts.bisection_tolerance) {
      const double mid = 0.5 * (lo + hi);
      if (robust_at(PointOnRay(base, u, mid))) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    radius = std::min(radius, lo);
  }
  estimate.radius = radius;
  return estimate;
}

std::string strategy_color_key(const Vector& x) {
  std::string text = "s=";
  const TargetSet support = support_of(x);
  for (std::size_t i = 0; i < support.size(); ++i) {
    text += (i ? "," : "") + std::to_string(support[i]);
  }
  text += ";x=";
  char buffer[32];
  for (Index k = 0; k < x.size(); ++k) {
    double rounded = std::round(x(k) * 1000.0) / 1000.0;
    if (rounded == 0) rounded = 0;
    std::snprintf(buffer, sizeof buffer, "%s%.3f", k ? "," : "", rounded);
    text += buffer;
  }
  std::snprintf(buffer, sizeof buffer, "%016llx",
                static_cast<unsigned long long>(Fnv1a(text)));
  return buffer;
}

SweepResult simplex_grid_sweep(const GameInstance& template_game, double step,
                               const SolverOptions& opts, int threads,
                               int cross_check_stride) {
  if (template_game.num_types() != 3) {
    throw PreconditionViolated("simplex grid sweep requires exactly three types");
  }
  const double divisions_real = 1.0 / step;
  const int m = static_cast<int>(std::lround(divisions_real));
  if (!(step > 0) || m < 1 || std::abs(m * step - 1.0) > 1e-9) {
    throw PreconditionViolated("grid step must divide 1");
  }

  SweepResult sweep;
  sweep.step = step;
  sweep.divisions = m;
  std::vector<std::vector<int>> index_of(static_cast<std::size_t>(m + 1),
                                         std::vector<int>(static_cast<std::size_t>(m + 1), -1));
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; i + j <= m; ++j) {
      GridPoint point;
      point.i = i;
      point.j = j;
      point.p1 = static_cast<double>(i) / m;
      point.p2 = static_cast<double>(j) / m;
      point.p3 = static_cast<double>(m - i - j) / m;
      index_of[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          static_cast<int>(sweep.points.size());
      sweep.points.push_back(std::move(point));
    }
  }

  auto probabilities = [](const GridPoint& point) {
    Vector p(3);
    p << point.p1, point.p2, point.p3;
    return p;
  };

  parallel_for(sweep.points.size(), threads, [&](std::size_t idx) {
    GridPoint& point = sweep.points[idx];
    try {
      const GameInstance game = template_game.with_probabilities(probabilities(point));
      const EquilibriumResult hbne = solve_hbne(game, opts);
      point.x = hbne.defender_strategy.allocation();
      point.support = hbne.defender_support;
      point.color_key = strategy_color_key(point.x);
      point.solved = true;
      point.solver_status = "ok";
    } catch (const Error& e) {
      point.solver_status = e.kind();
    }
  });

  auto neighbors = [&](const GridPoint& point) {
    std::vector<int> out;
    const int moves[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    for (const auto& move : moves) {
      const int i = point.i + move[0];
      const int j = point.j + move[1];
      if (i < 0 || j < 0 || i + j > m) continue;
      out.push_back(index_of[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    return out;
  };

  int robust_count = 0;
  for (GridPoint& point : sweep.points) {
    if (!point.solved) continue;
    bool same = true;
    for (int nb : neighbors(point)) {
      const GridPoint& other = sweep.points[static_cast<std::size_t>(nb)];
      same &= other.solved && other.color_key == point.color_key;
    }
    point.locally_robust = same;
    robust_count += same ? 1 : 0;
  }
  sweep.locally_robust_fraction =
      sweep.points.empty() ? 0.0
                           : static_cast<double>(robust_count) / sweep.points.size();

  if (cross_check_stride > 0) {
    for (std::size_t idx = 0; idx < sweep.points.size();
         idx += static_cast<std::size_t>(cross_check_stride)) {
      const GridPoint& point = sweep.points[idx];
      if (!point.solved) continue;
      const GameInstance game = template_game.with_probabilities(probabilities(point));
      const DefenderStrategy x(game, point.x);
      bool all = true;
      for (int nb : neighbors(point)) {
        const TypeDistribution p_prime(probabilities(sweep.points[static_cast<std::size_t>(nb)]));
        all &= check_robust(game, x, p_prime, opts.tie_tol, opts.numerics).is_robust;
      }
      ++sweep.cross_checked;
      sweep.cross_check_robust += all ? 1 : 0;
    }
  }
  return sweep;
}

}  // namespace mtdhg
