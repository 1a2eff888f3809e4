#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace l0 {

// Tie handling for the set-valued cases of hard thresholding and the
// box-constrained l0 prox (|c| exactly at the threshold, or the zero and
// nonzero candidates having equal objective value).
enum class TieRule { Zero, Keep };

// Box X = {x : lower <= x <= upper}. Entries may be +/-infinity.
struct BoxConstraint {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static BoxConstraint unbounded(Eigen::Index n) {
    const double inf = std::numeric_limits<double>::infinity();
    return {Eigen::VectorXd::Constant(n, -inf), Eigen::VectorXd::Constant(n, inf)};
  }

  static BoxConstraint uniform(Eigen::Index n, double lo, double hi) {
    return {Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi)};
  }

  Eigen::Index size() const { return lower.size(); }

  bool well_formed() const {
    return lower.size() == upper.size() && (lower.array() <= upper.array()).all();
  }

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
  }
};

// Hard-threshold level gamma >= 0 plus the rule for |c| == gamma.
struct Threshold {
  double gamma = 0.0;
  TieRule tie = TieRule::Zero;
};

inline double clamp_scalar(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

inline Eigen::VectorXd project_box(const Eigen::Ref<const Eigen::VectorXd>& x,
                                   const BoxConstraint& box) {
  return x.cwiseMax(box.lower).cwiseMin(box.upper);
}

inline double soft_threshold_scalar(double c, double lam) {
  const double mag = std::abs(c) - lam;
  return mag > 0.0 ? (c > 0.0 ? mag : -mag) : 0.0;
}

inline Eigen::VectorXd soft_threshold(const Eigen::Ref<const Eigen::VectorXd>& c, double lam) {
  if (!(lam > 0.0)) throw std::invalid_argument("soft_threshold: lam must be positive");
  return c.unaryExpr([lam](double v) { return soft_threshold_scalar(v, lam); });
}

inline double hard_threshold_scalar(double c, double gamma, TieRule tie = TieRule::Zero) {
  const double mag = std::abs(c);
  if (mag > gamma) return c;
  if (mag < gamma) return 0.0;
  return tie == TieRule::Keep ? c : 0.0;
}

inline Eigen::VectorXd hard_threshold(const Eigen::Ref<const Eigen::VectorXd>& c,
                                      const Threshold& th) {
  if (!(th.gamma >= 0.0)) throw std::invalid_argument("hard_threshold: gamma must be >= 0");
  return c.unaryExpr([&th](double v) { return hard_threshold_scalar(v, th.gamma, th.tie); });
}

// Global minimizer of h(x) = lam*||x||_0 + (x - c)^2 / 2 over [lo, hi].
//
// The candidate set is {0, clamp(c)}: dropping the l0 term, the quadratic is
// minimized at clamp(c), and the two functions differ only at zero. When c
// lies inside the interval this reduces to hard thresholding at sqrt(2*lam);
// otherwise the boundary point competes with zero directly. Thresholded
// outputs are written as literal 0.0 so support sets stay exact.
inline double prox_l0_box_1d(double c, double lam, double lo, double hi,
                             TieRule tie = TieRule::Zero) {
  if (!(lo <= hi)) throw std::invalid_argument("prox_l0_box_1d: lo > hi");
  if (!(lam > 0.0)) throw std::invalid_argument("prox_l0_box_1d: lam must be positive");

  const double p = clamp_scalar(c, lo, hi);
  if (lo > 0.0 || hi < 0.0) return p;  // zero infeasible
  if (c >= lo && c <= hi) return hard_threshold_scalar(c, std::sqrt(2.0 * lam), tie);
  if (p == 0.0) return 0.0;  // boundary candidate coincides with zero

  // c outside the interval: compare h at the near boundary against h(0).
  const double h_p = lam + 0.5 * (p - c) * (p - c);
  const double h_0 = 0.5 * c * c;
  if (h_p < h_0) return p;
  if (h_p > h_0) return 0.0;
  return tie == TieRule::Keep ? p : 0.0;
}

inline Eigen::VectorXd prox_l0_box(const Eigen::Ref<const Eigen::VectorXd>& c, double lam,
                                   const BoxConstraint& box, TieRule tie = TieRule::Zero) {
  if (c.size() != box.size()) throw std::invalid_argument("prox_l0_box: dimension mismatch");
  Eigen::VectorXd out(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    out[i] = prox_l0_box_1d(c[i], lam, box.lower[i], box.upper[i], tie);
  }
  return out;
}

}  // namespace l0
