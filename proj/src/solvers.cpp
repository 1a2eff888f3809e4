#include "l0pack/solvers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace l0 {

bool stop_check(const StopRule& rule, const Eigen::Ref<const Eigen::VectorXd>& x_new,
                const Eigen::Ref<const Eigen::VectorXd>& x_old) {
  if (x_new.size() != x_old.size()) throw std::invalid_argument("stop_check: length mismatch");
  switch (rule.kind) {
    case StopKind::RelChange:
      return (x_new - x_old).norm() / std::max(1.0, x_new.norm()) < rule.tol;
    case StopKind::InfNorm:
      return (x_new - x_old).cwiseAbs().maxCoeff() < rule.tol;
  }
  return false;
}

void SolverConfig::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("SolverConfig: lambda must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("SolverConfig: mu must be positive");
  if (!(omega > 0.0 && omega < 1.0)) {
    throw std::invalid_argument("SolverConfig: omega must lie in (0,1)");
  }
  if (max_iter <= 0) throw std::invalid_argument("SolverConfig: max_iter must be positive");
  if (!(stop.tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
  if (!(nmapg_eta >= 0.0 && nmapg_eta < 1.0)) {
    throw std::invalid_argument("SolverConfig: nmapg_eta must lie in [0,1)");
  }
  if (!(nmapg_delta > 0.0)) throw std::invalid_argument("SolverConfig: nmapg_delta > 0");
  if (ifb_beta < 0.0) throw std::invalid_argument("SolverConfig: ifb_beta must be >= 0");
}

long SolverResult::total_ncf() const {
  long s = 0;
  for (const auto& r : trace) s += r.ncf;
  return s;
}

long SolverResult::total_ncgf() const {
  long s = 0;
  for (const auto& r : trace) s += r.ncgf;
  return s;
}

double SolverResult::restart_rate() const {
  if (trace.empty()) return 0.0;
  long s = 0;
  for (const auto& r : trace) s += r.restarted ? 1 : 0;
  return static_cast<double>(s) / static_cast<double>(trace.size());
}

namespace {

bool is_penalized(const std::vector<std::uint8_t>& mask, Eigen::Index i) {
  return mask.empty() || mask[static_cast<std::size_t>(i)] != 0;
}

// Prox step shared by every solver: l0 prox on penalized coordinates,
// plain projection on the rest.
Eigen::VectorXd prox_step(const Eigen::Ref<const Eigen::VectorXd>& center, double lam_eff,
                          const BoxConstraint& box, TieRule tie,
                          const std::vector<std::uint8_t>& mask) {
  Eigen::VectorXd out(center.size());
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    out[i] = is_penalized(mask, i)
                 ? prox_l0_box_1d(center[i], lam_eff, box.lower[i], box.upper[i], tie)
                 : clamp_scalar(center[i], box.lower[i], box.upper[i]);
  }
  return out;
}

std::vector<int> support_of(const Eigen::Ref<const Eigen::VectorXd>& x,
                            const std::vector<std::uint8_t>& mask) {
  std::vector<int> s;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0 && is_penalized(mask, i)) s.push_back(static_cast<int>(i));
  }
  return s;
}

struct LoopState {
  const SmoothObjective& obj;
  const BoxConstraint& box;
  const SolverConfig& cfg;
  SolverResult result;

  LoopState(const SmoothObjective& o, const BoxConstraint& b, const SolverConfig& c,
            const Eigen::Ref<const Eigen::VectorXd>& x0)
      : obj(o), box(b), cfg(c) {
    c.validate();
    if (!b.well_formed()) throw std::invalid_argument("solver: malformed box");
    if (x0.size() != o.dimension()) throw std::invalid_argument("solver: x0 dimension mismatch");
    if (!b.contains(x0)) throw std::invalid_argument("solver: x0 not feasible");
    if (!c.penalized.empty() &&
        c.penalized.size() != static_cast<std::size_t>(o.dimension())) {
      throw std::invalid_argument("solver: penalized mask size mismatch");
    }
    if (!(o.lipschitz() > 0.0)) throw std::invalid_argument("solver: objective has L = 0");
    result.x = x0;
  }

  // Records iteration k; the H evaluation here is diagnostic and not counted.
  void record(const Eigen::VectorXd& x_new, const Eigen::VectorXd& x_old,
              const Eigen::VectorXd& y, bool restarted, int ncf, int ncgf) {
    IterateRecord rec;
    rec.objective = composite_objective(obj, cfg.lambda, x_new, cfg.penalized);
    if (!std::isfinite(rec.objective)) {
      throw std::runtime_error("solver: non-finite objective value at iteration " +
                               std::to_string(result.trace.size() + 1));
    }
    rec.support = support_of(x_new, cfg.penalized);
    rec.step_norm = (x_new - x_old).norm();
    rec.gap_norm = (x_new - y).norm();
    rec.restarted = restarted;
    rec.ncf = ncf;
    rec.ncgf = ncgf;
    result.trace.push_back(std::move(rec));
  }

  SolverResult finish(Eigen::VectorXd x, bool converged) {
    result.x = std::move(x);
    result.status = converged ? SolveStatus::Converged : SolveStatus::MaxIter;
    result.iterations = static_cast<int>(result.trace.size());
    return std::move(result);
  }
};

}  // namespace

double composite_objective(const SmoothObjective& obj, double lambda,
                           const Eigen::Ref<const Eigen::VectorXd>& x,
                           const std::vector<std::uint8_t>& penalized) {
  long nnz = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0 && is_penalized(penalized, i)) ++nnz;
  }
  return lambda * static_cast<double>(nnz) + obj.value(x);
}

SolverResult piht(const SmoothObjective& obj, const BoxConstraint& box,
                  const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0) {
  LoopState st(obj, box, cfg, x0);
  const double step = obj.lipschitz() + cfg.mu;
  const double lam_eff = cfg.lambda / step;

  Eigen::VectorXd x = x0;
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    Eigen::VectorXd g = obj.gradient(x);
    Eigen::VectorXd x_new = prox_step(x - g / step, lam_eff, box, cfg.tie, cfg.penalized);
    st.record(x_new, x, x, false, 0, 1);
    if (stop_check(cfg.stop, x_new, x)) {
      x = std::move(x_new);
      converged = true;
      break;
    }
    x = std::move(x_new);
  }
  return st.finish(std::move(x), converged);
}

SolverResult apiht(const SmoothObjective& obj, const BoxConstraint& box,
                   const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0) {
  LoopState st(obj, box, cfg, x0);
  const double step = obj.lipschitz() + cfg.mu;
  const double lam_eff = cfg.lambda / step;

  Eigen::VectorXd x_prev = x0;
  Eigen::VectorXd x = x0;
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    // Extrapolate only inside the subspace of vectors supported on the
    // nonzero coordinates of x^k; zero coordinates are held at zero so the
    // momentum term never resurrects a coordinate the newer iterate dropped.
    Eigen::VectorXd y = x;
    bool moved = false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] != 0.0) {
        y[i] = x[i] + cfg.omega * (x[i] - x_prev[i]);
        moved = moved || y[i] != x[i];
      }
    }
    Eigen::VectorXd g = obj.gradient(y);
    int ncgf = 1;
    bool restarted = false;
    if (moved &&
        (cfg.force_restart || !box.contains(y) || (y - x).dot(g) > 0.0)) {
      y = x;
      g = obj.gradient(y);  // the gradient at x^k was never computed
      ncgf = 2;
      restarted = true;
    }
    Eigen::VectorXd x_new = prox_step(y - g / step, lam_eff, box, cfg.tie, cfg.penalized);
    st.record(x_new, x, y, restarted, 0, ncgf);
    if (stop_check(cfg.stop, x_new, x)) {
      x = std::move(x_new);
      converged = true;
      break;
    }
    x_prev = std::move(x);
    x = std::move(x_new);
  }
  return st.finish(std::move(x), converged);
}

SolverResult epiht(const SmoothObjective& obj, const BoxConstraint& box,
                   const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0) {
  LoopState st(obj, box, cfg, x0);
  const double step = obj.lipschitz() + cfg.mu;
  const double lam_eff = cfg.lambda / step;

  Eigen::VectorXd x_prev = x0;
  Eigen::VectorXd x = x0;
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    Eigen::VectorXd y = x + cfg.omega * (x - x_prev);
    const double h_x = composite_objective(obj, cfg.lambda, x, cfg.penalized);
    const double h_y = box.contains(y)
                           ? composite_objective(obj, cfg.lambda, y, cfg.penalized)
                           : std::numeric_limits<double>::infinity();
    bool restarted = false;
    if (h_y > h_x) {
      y = x;
      restarted = true;
    }
    Eigen::VectorXd g = obj.gradient(y);
    Eigen::VectorXd x_new = prox_step(y - g / step, lam_eff, box, cfg.tie, cfg.penalized);
    st.record(x_new, x, y, restarted, 2, 1);
    if (stop_check(cfg.stop, x_new, x)) {
      x = std::move(x_new);
      converged = true;
      break;
    }
    x_prev = std::move(x);
    x = std::move(x_new);
  }
  return st.finish(std::move(x), converged);
}

SolverResult ifb(const SmoothObjective& obj, const BoxConstraint& box,
                 const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0) {
  LoopState st(obj, box, cfg, x0);
  const double L = obj.lipschitz();
  const double beta = cfg.ifb_beta;
  const double alpha = cfg.ifb_alpha > 0.0 ? cfg.ifb_alpha : (0.999999 - 2.0 * beta) / L;
  if (!(alpha > 0.0) || alpha * L + 2.0 * beta >= 1.0) {
    throw std::invalid_argument("ifb: parameters must satisfy alpha*L + 2*beta < 1");
  }
  const double lam_eff = cfg.lambda * alpha;

  Eigen::VectorXd x_prev = x0;
  Eigen::VectorXd x = x0;
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    Eigen::VectorXd g = obj.gradient(x);
    // The two quadratic terms (weight 1/(4*alpha) each) combine into one of
    // weight 1/(2*alpha) centered at the midpoint of their centers.
    Eigen::VectorXd mid = x + beta * (x - x_prev) - alpha * g;
    Eigen::VectorXd x_new = prox_step(mid, lam_eff, box, cfg.tie, cfg.penalized);
    Eigen::VectorXd y = x + 2.0 * beta * (x - x_prev);
    st.record(x_new, x, y, false, 0, 1);
    if (stop_check(cfg.stop, x_new, x)) {
      x = std::move(x_new);
      converged = true;
      break;
    }
    x_prev = std::move(x);
    x = std::move(x_new);
  }
  return st.finish(std::move(x), converged);
}

SolverResult mapg(const SmoothObjective& obj, const BoxConstraint& box,
                  const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0) {
  LoopState st(obj, box, cfg, x0);
  const double alpha = 1.0 / (obj.lipschitz() + cfg.mu);
  const double lam_eff = cfg.lambda * alpha;

  Eigen::VectorXd x_prev = x0;
  Eigen::VectorXd x = x0;
  Eigen::VectorXd z = x0;
  double t_prev = 0.0;
  double t = 1.0;
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    Eigen::VectorXd y = x + (t_prev / t) * (z - x) + ((t_prev - 1.0) / t) * (x - x_prev);
    Eigen::VectorXd z_new =
        prox_step(y - alpha * obj.gradient(y), lam_eff, box, cfg.tie, cfg.penalized);
    Eigen::VectorXd v =
        prox_step(x - alpha * obj.gradient(x), lam_eff, box, cfg.tie, cfg.penalized);
    const double f_z = composite_objective(obj, cfg.lambda, z_new, cfg.penalized);
    const double f_v = composite_objective(obj, cfg.lambda, v, cfg.penalized);
    Eigen::VectorXd x_new = f_z <= f_v ? z_new : v;
    st.record(x_new, x, y, false, 2, 2);
    if (stop_check(cfg.stop, x_new, x)) {
      x = std::move(x_new);
      converged = true;
      break;
    }
    x_prev = std::move(x);
    x = std::move(x_new);
    z = std::move(z_new);
    t_prev = t;
    t = apg_t_next(t);
  }
  return st.finish(std::move(x), converged);
}

SolverResult nmapg(const SmoothObjective& obj, const BoxConstraint& box,
                   const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0) {
  LoopState st(obj, box, cfg, x0);
  const double alpha = 1.0 / (obj.lipschitz() + cfg.mu);
  const double lam_eff = cfg.lambda * alpha;
  const double eta = cfg.nmapg_eta;
  const double delta = cfg.nmapg_delta;

  Eigen::VectorXd x_prev = x0;
  Eigen::VectorXd x = x0;
  Eigen::VectorXd z = x0;
  double t_prev = 0.0;
  double t = 1.0;
  double q = 1.0;
  double c = composite_objective(obj, cfg.lambda, x, cfg.penalized);
  bool first = true;
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    Eigen::VectorXd y = x + (t_prev / t) * (z - x) + ((t_prev - 1.0) / t) * (x - x_prev);
    Eigen::VectorXd z_new =
        prox_step(y - alpha * obj.gradient(y), lam_eff, box, cfg.tie, cfg.penalized);
    const double f_z = composite_objective(obj, cfg.lambda, z_new, cfg.penalized);
    int ncf = first ? 2 : 1;  // the first iteration also evaluated c_1 = F(x^0)
    int ncgf = 1;
    first = false;
    Eigen::VectorXd x_new;
    double f_new;
    bool fallback = false;
    if (f_z <= c - delta * (z_new - y).squaredNorm()) {
      x_new = z_new;
      f_new = f_z;
    } else {
      Eigen::VectorXd v =
          prox_step(x - alpha * obj.gradient(x), lam_eff, box, cfg.tie, cfg.penalized);
      const double f_v = composite_objective(obj, cfg.lambda, v, cfg.penalized);
      ++ncf;
      ++ncgf;
      fallback = true;
      if (f_z <= f_v) {
        x_new = z_new;
        f_new = f_z;
      } else {
        x_new = std::move(v);
        f_new = f_v;
      }
    }
    st.record(x_new, x, y, fallback, ncf, ncgf);
    const double q_next = nmapg_q_next(eta, q);
    c = (eta * q * c + f_new) / q_next;
    q = q_next;
    if (stop_check(cfg.stop, x_new, x)) {
      x = std::move(x_new);
      converged = true;
      break;
    }
    x_prev = std::move(x);
    x = std::move(x_new);
    z = std::move(z_new);
    t_prev = t;
    t = apg_t_next(t);
  }
  return st.finish(std::move(x), converged);
}

FistaResult fista_l1(const SmoothObjective& obj, double lam1,
                     const Eigen::Ref<const Eigen::VectorXd>& x0, const StopRule& stop,
                     int max_iter) {
  if (!(lam1 > 0.0)) throw std::invalid_argument("fista_l1: lam1 must be positive");
  if (x0.size() != obj.dimension()) throw std::invalid_argument("fista_l1: x0 dimension");
  const double L = obj.lipschitz();
  if (!(L > 0.0)) throw std::invalid_argument("fista_l1: objective has L = 0");

  FistaResult res;
  Eigen::VectorXd x_prev = x0;
  Eigen::VectorXd x = x0;
  double t_prev = 1.0;
  double t = 1.0;
  for (int k = 0; k < max_iter; ++k) {
    Eigen::VectorXd y = x + ((t_prev - 1.0) / t) * (x - x_prev);
    Eigen::VectorXd x_new = soft_threshold(y - obj.gradient(y) / L, lam1 / L);
    res.iterations = k + 1;
    if (stop_check(stop, x_new, x)) {
      res.x = std::move(x_new);
      res.status = SolveStatus::Converged;
      return res;
    }
    x_prev = std::move(x);
    x = std::move(x_new);
    t_prev = t;
    t = apg_t_next(t);
  }
  res.x = std::move(x);
  res.status = SolveStatus::MaxIter;
  return res;
}

}  // namespace l0
