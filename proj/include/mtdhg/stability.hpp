#pragma once

// Linear-system test for when a BSSE is also an HBNE.
//
// For an attacker policy y (n x K, stacked row-major into an nK-vector):
//
//   SOL(y) = { (y', λ) : y' in (Ω_a)^n, λ > 0, A1 y' = λ B y, A2 y' = 0 }
//   A1     = ( A(θ_1) | ... | A(θ_n) ),  A(θ_j) = P(θ_j) diag(ΔU_a(θ_j,·) / ΔU_d(·))
//   B      = ( P(θ_1) I_K | ... | P(θ_n) I_K )
//   A2     = diag(1_{nK} - χ(y))
//
// Nonempty SOL(y_BSSE) is the proposed sufficient condition for the BSSE to
// also be an HBNE. It is not a certificate: pure replies with every type on
// one target always pass, whether or not a best-response completion exists.

#include <optional>
#include <string>

#include "mtdhg/equilibria.hpp"
#include "mtdhg/model.hpp"

namespace mtdhg {

struct SolSystem {
  Matrix A1;       // K x nK
  Matrix B;        // K x nK
  Matrix A2;       // nK x nK, diagonal
  Vector rhs_base; // B * vec(y)
};

enum class StabilityMethod { kGeneral, kUniform, kBernoulliRank, kOnePoint };

const char* to_string(StabilityMethod method);

struct StabilityReport {
  StabilityMethod method = StabilityMethod::kGeneral;
  bool sol_nonempty = false;
  std::optional<AttackerPolicy> witness_y_prime;
  double witness_lambda = 0;

  // Bernoulli rank test only.
  bool rank_condition_holds = false;
  Index rank = 0;
  Index rank_threshold = 0;  // 2K - 1

  // Filled in by classify_stability.
  bool hbne_pair_verified = false;
  bool hbne_strategy_verified = false;
};

struct StabilityOptions {
  SolverOptions solver;
  double lambda_threshold = 1e-7;  // SOL is nonempty iff max λ exceeds this
  double lambda_cap = 1e6;
  double rank_tol = 1e-9;
  bool bernoulli_single_factor = false;
};

SolSystem build_sol_system(const GameInstance& game, const AttackerPolicy& y);

// Probability factors stripped: A°(θ_j) = diag(ratios), B° = (I_K ... I_K).
SolSystem build_sol_system_uniform(const GameInstance& game, const AttackerPolicy& y);

// Maximizes λ over the SOL polytope and reports nonemptiness with a witness.
StabilityReport check_sol(const GameInstance& game, const AttackerPolicy& y,
                          const StabilityOptions& opts = {});

// Same test on the probability-free matrices; throws NotUniform unless P is
// uniform to 1e-9.
StabilityReport check_sol_uniform(const GameInstance& game, const AttackerPolicy& y,
                                  const StabilityOptions& opts = {});

// Stacked matrix A = (A1'; A2') of the two-type rank test. With
// `single_factor` the inner P(θ_i) of A1'(θ_i) is dropped.
Matrix bernoulli_rank_matrix(const GameInstance& game, const AttackerPolicy& y,
                             bool single_factor);

// Sufficient condition rank A < 2K - 1. Requires n = 2, R_d = R_a = 1 and a
// non-degenerate P; throws PreconditionViolated otherwise.
StabilityReport check_bernoulli_rank(const GameInstance& game, const AttackerPolicy& y,
                                     const StabilityOptions& opts = {});

struct ClassificationRecord {
  bool sol_nonempty = false;
  bool pair_hbne = false;
  bool strategy_hbne = false;
  double bsse_eu = 0;
  long long lp_calls = 0;
  Vector bsse_x;
  Matrix bsse_y;
  double sol_lambda = 0;
};

// Solves the BSSE and evaluates the SOL test plus both readings of
// "the BSSE is an HBNE": the exact pair, and the defender strategy admitting
// some best-response completion.
ClassificationRecord classify_stability(const GameInstance& game,
                                        const StabilityOptions& opts = {});

// "instance_id,seed,n,K,sol_nonempty,pair_hbne,strategy_hbne,bsse_eu,lp_calls"
std::string classification_csv_header();
std::string classification_csv_row(const std::string& instance_id, std::uint64_t seed,
                                   const GameInstance& game,
                                   const ClassificationRecord& record);

}  // namespace mtdhg
