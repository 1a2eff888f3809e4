#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <vector>

#include "l0pack/objectives.hpp"
#include "l0pack/prox.hpp"

namespace l0 {

enum class StopKind { RelChange, InfNorm };

struct StopRule {
  StopKind kind = StopKind::RelChange;
  double tol = 1e-5;
};

// REL_CHANGE: ||x_new - x_old|| / max(1, ||x_new||) < tol
// INF_NORM:   max_i |x_new_i - x_old_i| < tol
bool stop_check(const StopRule& rule, const Eigen::Ref<const Eigen::VectorXd>& x_new,
                const Eigen::Ref<const Eigen::VectorXd>& x_old);

enum class SolveStatus { Converged, MaxIter };

// One row per iteration k = 1, 2, ...
struct IterateRecord {
  double objective = 0.0;    // H(x^k) = lambda*||x^k||_0 + f(x^k)
  std::vector<int> support;  // indices of nonzero (penalized) coordinates
  double step_norm = 0.0;    // ||x^k - x^{k-1}||
  double gap_norm = 0.0;     // ||x^k - y^k||
  bool restarted = false;
  int ncf = 0;   // f evaluations performed by the algorithm this iteration
  int ncgf = 0;  // gradient evaluations this iteration
};

using IterateTrace = std::vector<IterateRecord>;

struct SolverConfig {
  double lambda = 0.3;  // l0 weight
  double mu = 1e-6;     // proximal term
  double omega = 0.99;  // extrapolation weight, constant
  int max_iter = 10000;
  StopRule stop{};
  TieRule tie = TieRule::Zero;
  std::uint64_t rng_seed = 0;

  // Coordinates carrying the l0 penalty; empty means all. Unpenalized
  // coordinates get a plain box projection in every prox step.
  std::vector<std::uint8_t> penalized;

  // Diagnostic: take the reset branch of the extrapolated methods on every
  // iteration, which must reproduce the plain PIHT sequence.
  bool force_restart = false;

  // IFB parameters; alpha <= 0 selects the default (0.999999 - 2*beta)/L.
  double ifb_beta = 1e-6;
  double ifb_alpha = 0.0;

  // nmAPG parameters.
  double nmapg_eta = 0.8;
  double nmapg_delta = 1e-5;

  void validate() const;
};

struct SolverResult {
  Eigen::VectorXd x;
  SolveStatus status = SolveStatus::MaxIter;
  int iterations = 0;
  IterateTrace trace;

  long total_ncf() const;
  long total_ncgf() const;
  double restart_rate() const;
};

// H(x) = lambda * ||x_penalized||_0 + f(x); x is assumed feasible.
double composite_objective(const SmoothObjective& obj, double lambda,
                           const Eigen::Ref<const Eigen::VectorXd>& x,
                           const std::vector<std::uint8_t>& penalized = {});

SolverResult piht(const SmoothObjective& obj, const BoxConstraint& box,
                  const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0);

// Algorithm with support-restricted extrapolation and gradient-sign restart.
SolverResult apiht(const SmoothObjective& obj, const BoxConstraint& box,
                   const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0);

SolverResult epiht(const SmoothObjective& obj, const BoxConstraint& box,
                   const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0);

SolverResult ifb(const SmoothObjective& obj, const BoxConstraint& box,
                 const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0);

SolverResult mapg(const SmoothObjective& obj, const BoxConstraint& box,
                  const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0);

SolverResult nmapg(const SmoothObjective& obj, const BoxConstraint& box,
                   const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0);

// Shared accelerated-scheme recurrences.
inline double apg_t_next(double t) { return (std::sqrt(1.0 + 4.0 * t * t) + 1.0) / 2.0; }
inline double nmapg_q_next(double eta, double q) { return eta * q + 1.0; }

struct FistaResult {
  Eigen::VectorXd x;
  int iterations = 0;
  SolveStatus status = SolveStatus::MaxIter;
};

// Accelerated proximal gradient on f + lam1*||x||_1 (soft thresholding,
// step 1/L); used to warm-start the l0 solvers.
FistaResult fista_l1(const SmoothObjective& obj, double lam1,
                     const Eigen::Ref<const Eigen::VectorXd>& x0, const StopRule& stop,
                     int max_iter = 10000);

}  // namespace l0
