#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "l0pack/io.hpp"
#include "l0pack/objectives.hpp"
#include "l0pack/solvers.hpp"

namespace l0 {

enum class Method { Piht, Ifb, Mapg, Nmapg, Epiht, Apiht };

const std::vector<Method>& all_methods();
std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

SolverResult run_method(Method m, const SmoothObjective& obj, const BoxConstraint& box,
                        const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0);

// Sensing matrix with iid Gaussian entries and unit-norm columns, a +/-1
// spike signal with ||x_true||_0 = s, and b = A x_true + noise_sigma * N(0,1).
struct CsInstance {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd x_true;
  int m = 0, n = 0, s = 0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

CsInstance gen_cs_instance(int m, int n, int s, double noise_sigma, std::uint64_t seed);

// Per-replicate RNG stream for (suite seed, n, s, replicate).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c);

double relative_error(const Eigen::Ref<const Eigen::VectorXd>& x,
                      const Eigen::Ref<const Eigen::VectorXd>& x_true);
int l0_norm(const Eigen::Ref<const Eigen::VectorXd>& x);

struct CsSuiteConfig {
  int m = 750;
  std::vector<std::pair<int, int>> sizes;  // (n, s) cells
  int replicates = 20;
  std::vector<Method> methods = all_methods();
  double lambda = 0.3;
  double mu = 1e-6;
  double omega = 0.99;
  StopRule stop{StopKind::RelChange, 1e-5};
  int max_iter = 10000;
  double fista_lambda1 = 0.1;
  StopRule fista_stop{StopKind::RelChange, 1e-2};
  double noise_sigma = 0.22360679774997896;  // sqrt(0.05)
  double box_bound = 1e10;
  double nmapg_eta = 0.8;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency

  // Desk-scale defaults: n in {2000, 3500, 5000} with s = n/100 and 2n/100.
  static CsSuiteConfig desk_scale();
  // The published protocol: m = 3000, n in {8000, 14000, 20000}, 50 replicates.
  static CsSuiteConfig full_scale();
};

struct MethodRun {
  Method method = Method::Piht;
  SolverResult result;
  double seconds = 0.0;      // solver wall clock, warm start included
  int warm_iters = 0;
  double relerr = 0.0;
  int l0 = 0;
  int iters_total = 0;       // solver iterations + warm-start iterations
};

struct ReplicateResult {
  int n = 0, s = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  double lipschitz = 0.0;  // gradient Lipschitz constant of the instance
  std::vector<MethodRun> runs;
  bool failed = false;
  std::string error;
};

// One entry per (cell, replicate), in deterministic order. Replicates may be
// processed by parallel workers; each derives its RNG stream from
// (suite seed, n, s, replicate) so the schedule never changes results.
std::vector<ReplicateResult> run_cs_replicates(const CsSuiteConfig& cfg);

ExperimentReport aggregate_report(const std::vector<Method>& methods,
                                  const std::vector<ReplicateResult>& reps);

ExperimentReport run_cs_suite(const CsSuiteConfig& cfg);

struct LogRegDataset {
  Eigen::MatrixXd X_train;
  Eigen::VectorXd y_train;
  Eigen::MatrixXd X_test;
  Eigen::VectorXd y_test;
  Eigen::VectorXd w_true;  // size n+1 when known, empty otherwise
  int s_true = 0;
};

// Desk-scale stand-in for a real sparse classification set: features iid
// normal, labels from a sparse hyperplane, margin-violating samples resampled.
LogRegDataset gen_synthetic_logreg(int N, int n, int s_true, double margin,
                                   std::uint64_t seed);

struct LogRegSuiteConfig {
  std::vector<Method> methods = all_methods();
  double lambda = 5e-5;
  double mu = 1e-6;
  double omega = 0.99;
  StopRule stop{StopKind::InfNorm, 5e-4};
  int max_iter = 20000;
  double fista_lambda1 = 1e-3;
  StopRule fista_stop{StopKind::InfNorm, 0.02};
  double box_bound = 1e10;
  double nmapg_eta = 0.6;
  std::uint64_t seed = 0;
};

struct LogRegRun {
  Method method = Method::Piht;
  SolverResult result;
  double seconds = 0.0;
  int warm_iters = 0;
  int iters_total = 0;
  double accuracy = 0.0;
  int l0 = 0;  // nonzeros of u (intercept excluded)
};

double classification_accuracy(const Eigen::Ref<const Eigen::MatrixXd>& X,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               const Eigen::Ref<const Eigen::VectorXd>& w);

std::vector<LogRegRun> run_logreg_methods(const LogRegDataset& data,
                                          const LogRegSuiteConfig& cfg);

ExperimentReport aggregate_logreg_report(const LogRegDataset& data,
                                         const std::vector<LogRegRun>& runs);

ExperimentReport run_logreg_suite(const LogRegDataset& data, const LogRegSuiteConfig& cfg);

}  // namespace l0
