#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>

namespace l0 {

// Convex differentiable f with an L-Lipschitz gradient on the feasible box.
class SmoothObjective {
 public:
  virtual ~SmoothObjective() = default;
  virtual Eigen::Index dimension() const = 0;
  virtual double value(const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;
  virtual double lipschitz() const = 0;
};

struct PowerMethodResult {
  double lmax = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Largest eigenvalue of A^T A by power iteration on the Gram operator,
// matrix-free (never forms A^T A). Deterministic given the seed. On
// non-convergence the last estimate is inflated by 1% so downstream step
// sizes stay conservative.
PowerMethodResult power_method_lmax(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                    double tol = 1e-8, int max_iter = 5000,
                                    std::uint64_t seed = 0);

// f(x) = ||Ax - b||^2 / 2, L = lambda_max(A^T A).
class LeastSquaresObjective : public SmoothObjective {
 public:
  LeastSquaresObjective(Eigen::MatrixXd A, Eigen::VectorXd b, std::uint64_t seed = 0);

  Eigen::Index dimension() const override { return A_.cols(); }
  double value(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  double lipschitz() const override { return lip_; }

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  double lip_;
};

// Mean logistic loss over samples (rows of X) with labels in {-1,+1}.
// The variable is (u, v) with the intercept v stored last; dimension n+1.
// L = lambda_max(Z^T Z) / (4N) with Z = [X, 1], the 1/4-curvature bound.
class LogisticObjective : public SmoothObjective {
 public:
  LogisticObjective(Eigen::MatrixXd samples, Eigen::VectorXd labels, std::uint64_t seed = 0);

  Eigen::Index dimension() const override { return samples_.cols() + 1; }
  double value(const Eigen::Ref<const Eigen::VectorXd>& w) const override;
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& w) const override;
  double lipschitz() const override { return lip_; }

  const Eigen::MatrixXd& samples() const { return samples_; }
  const Eigen::VectorXd& labels() const { return labels_; }

 private:
  Eigen::MatrixXd samples_;
  Eigen::VectorXd labels_;
  double lip_;
};

double logistic_lipschitz(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                          std::uint64_t seed = 0);

// Central differences (f(x+h e_i) - f(x-h e_i)) / 2h; test oracle.
Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::Ref<const Eigen::VectorXd>& x, double h);

}  // namespace l0
