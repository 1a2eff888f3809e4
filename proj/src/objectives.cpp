#include "l0pack/objectives.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace l0 {

PowerMethodResult power_method_lmax(const Eigen::Ref<const Eigen::MatrixXd>& A, double tol,
                                    int max_iter, std::uint64_t seed) {
  if (A.size() == 0 || A.norm() == 0.0) {
    throw std::invalid_argument("power_method_lmax: A must be nonzero");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("power_method_lmax: tol must be positive");

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(A.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
  v.normalize();

  PowerMethodResult res;
  double est_prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd w = A * v;          // Rayleigh quotient of the Gram operator
    const double est = w.squaredNorm();  // v is unit
    Eigen::VectorXd u = A.transpose() * w;
    const double un = u.norm();
    res.iterations = it;
    res.lmax = est;
    if (un == 0.0) {  // v landed in the nullspace; restart direction
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
      v.normalize();
      continue;
    }
    v = u / un;
    if (it > 1 && std::abs(est - est_prev) <= tol * std::max(est, 1e-300)) {
      res.converged = true;
      return res;
    }
    est_prev = est;
  }
  res.converged = false;
  res.lmax *= 1.01;
  return res;
}

LeastSquaresObjective::LeastSquaresObjective(Eigen::MatrixXd A, Eigen::VectorXd b,
                                             std::uint64_t seed)
    : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) {
    throw std::invalid_argument("LeastSquaresObjective: A rows must match b length");
  }
  lip_ = power_method_lmax(A_, 1e-8, 5000, seed).lmax;
  if (!(lip_ > 0.0)) throw std::invalid_argument("LeastSquaresObjective: zero operator");
}

double LeastSquaresObjective::value(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != A_.cols()) throw std::invalid_argument("ls_value: dimension mismatch");
  return 0.5 * (A_ * x - b_).squaredNorm();
}

Eigen::VectorXd LeastSquaresObjective::gradient(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != A_.cols()) throw std::invalid_argument("ls_gradient: dimension mismatch");
  return A_.transpose() * (A_ * x - b_);
}

namespace {

// log(1 + exp(t)) without overflow
inline double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

inline double sigmoid(double t) {
  return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

}  // namespace

double logistic_lipschitz(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                          std::uint64_t seed) {
  const Eigen::Index N = samples.rows();
  Eigen::MatrixXd Z(N, samples.cols() + 1);
  Z.leftCols(samples.cols()) = samples;
  Z.col(samples.cols()).setOnes();
  return power_method_lmax(Z, 1e-8, 5000, seed).lmax / (4.0 * static_cast<double>(N));
}

LogisticObjective::LogisticObjective(Eigen::MatrixXd samples, Eigen::VectorXd labels,
                                     std::uint64_t seed)
    : samples_(std::move(samples)), labels_(std::move(labels)) {
  if (samples_.rows() != labels_.size()) {
    throw std::invalid_argument("LogisticObjective: samples/labels size mismatch");
  }
  if (!((labels_.array() == 1.0) || (labels_.array() == -1.0)).all()) {
    throw std::invalid_argument("LogisticObjective: labels must be +/-1");
  }
  lip_ = logistic_lipschitz(samples_, seed);
}

double LogisticObjective::value(const Eigen::Ref<const Eigen::VectorXd>& w) const {
  if (w.size() != dimension()) throw std::invalid_argument("logistic_value: dimension mismatch");
  const Eigen::Index n = samples_.cols();
  Eigen::VectorXd margins = samples_ * w.head(n);
  margins.array() += w[n];
  double acc = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    acc += softplus(-labels_[i] * margins[i]);
  }
  return acc / static_cast<double>(samples_.rows());
}

Eigen::VectorXd LogisticObjective::gradient(
    const Eigen::Ref<const Eigen::VectorXd>& w) const {
  if (w.size() != dimension()) {
    throw std::invalid_argument("logistic_gradient: dimension mismatch");
  }
  const Eigen::Index n = samples_.cols();
  const Eigen::Index N = samples_.rows();
  Eigen::VectorXd margins = samples_ * w.head(n);
  margins.array() += w[n];
  Eigen::VectorXd coeff(N);  // -y_i * sigma(-y_i m_i) / N
  for (Eigen::Index i = 0; i < N; ++i) {
    coeff[i] = -labels_[i] * sigmoid(-labels_[i] * margins[i]) / static_cast<double>(N);
  }
  Eigen::VectorXd g(n + 1);
  g.head(n) = samples_.transpose() * coeff;
  g[n] = coeff.sum();
  return g;
}

Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::Ref<const Eigen::VectorXd>& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_difference_gradient: h must be positive");
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + h;
    const double fp = f(xp);
    xp[i] = xi - h;
    const double fm = f(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace l0
