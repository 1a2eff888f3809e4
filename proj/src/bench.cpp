#include "l0pack/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace l0 {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double sample_mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = sample_mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  return splitmix64(splitmix64(splitmix64(base ^ a) ^ b) ^ c);
}


const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {Method::Piht,  Method::Ifb,   Method::Mapg,
                                              Method::Nmapg, Method::Epiht, Method::Apiht};
  return methods;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Piht: return "piht";
    case Method::Ifb: return "ifb";
    case Method::Mapg: return "mapg";
    case Method::Nmapg: return "nmapg";
    case Method::Epiht: return "epiht";
    case Method::Apiht: return "apiht";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  for (Method m : all_methods()) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

SolverResult run_method(Method m, const SmoothObjective& obj, const BoxConstraint& box,
                        const SolverConfig& cfg, const Eigen::Ref<const Eigen::VectorXd>& x0) {
  switch (m) {
    case Method::Piht: return piht(obj, box, cfg, x0);
    case Method::Ifb: return ifb(obj, box, cfg, x0);
    case Method::Mapg: return mapg(obj, box, cfg, x0);
    case Method::Nmapg: return nmapg(obj, box, cfg, x0);
    case Method::Epiht: return epiht(obj, box, cfg, x0);
    case Method::Apiht: return apiht(obj, box, cfg, x0);
  }
  throw std::invalid_argument("run_method: unknown method");
}

CsInstance gen_cs_instance(int m, int n, int s, double noise_sigma, std::uint64_t seed) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("gen_cs_instance: m, n must be positive");
  if (s < 0 || s > n) throw std::invalid_argument("gen_cs_instance: need 0 <= s <= n");
  if (noise_sigma < 0.0) throw std::invalid_argument("gen_cs_instance: negative noise_sigma");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  CsInstance inst;
  inst.m = m;
  inst.n = n;
  inst.s = s;
  inst.noise_sigma = noise_sigma;
  inst.seed = seed;

  inst.A.resize(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) inst.A(i, j) = gauss(rng);
    inst.A.col(j).normalize();
  }

  // support chosen uniformly without replacement (partial Fisher-Yates)
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  inst.x_true = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < s; ++k) {
    std::uniform_int_distribution<int> pick(k, n - 1);
    std::swap(idx[k], idx[pick(rng)]);
    std::bernoulli_distribution coin(0.5);
    inst.x_true[idx[k]] = coin(rng) ? 1.0 : -1.0;
  }

  inst.b = inst.A * inst.x_true;
  if (noise_sigma > 0.0) {
    for (int i = 0; i < m; ++i) inst.b[i] += noise_sigma * gauss(rng);
  }
  return inst;
}

double relative_error(const Eigen::Ref<const Eigen::VectorXd>& x,
                      const Eigen::Ref<const Eigen::VectorXd>& x_true) {
  const double denom = x_true.norm();
  if (!(denom > 0.0)) throw std::invalid_argument("relative_error: x_true must be nonzero");
  return (x - x_true).norm() / denom;
}

int l0_norm(const Eigen::Ref<const Eigen::VectorXd>& x) {
  int nnz = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) ++nnz;
  }
  return nnz;
}

CsSuiteConfig CsSuiteConfig::desk_scale() {
  CsSuiteConfig cfg;
  cfg.m = 750;
  for (int n : {2000, 3500, 5000}) {
    cfg.sizes.emplace_back(n, n / 100);
    cfg.sizes.emplace_back(n, 2 * n / 100);
  }
  cfg.replicates = 20;
  return cfg;
}

CsSuiteConfig CsSuiteConfig::full_scale() {
  CsSuiteConfig cfg;
  cfg.m = 3000;
  for (int n : {8000, 14000, 20000}) {
    cfg.sizes.emplace_back(n, n / 100);
    cfg.sizes.emplace_back(n, 2 * n / 100);
  }
  cfg.replicates = 50;
  return cfg;
}

namespace {

ReplicateResult run_cs_replicate(const CsSuiteConfig& cfg, int n, int s, int rep) {
  ReplicateResult out;
  out.n = n;
  out.s = s;
  out.replicate = rep;
  out.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s),
                         static_cast<std::uint64_t>(rep));
  try {
    CsInstance inst = gen_cs_instance(cfg.m, n, s, cfg.noise_sigma, out.seed);
    LeastSquaresObjective obj(std::move(inst.A), inst.b, splitmix64(out.seed));
    const BoxConstraint box = BoxConstraint::uniform(n, -cfg.box_bound, cfg.box_bound);
    out.lipschitz = obj.lipschitz();

    const double t_warm0 = now_seconds();
    const Eigen::VectorXd atb = obj.A().transpose() * obj.b();
    FistaResult warm = fista_l1(obj, cfg.fista_lambda1, atb, cfg.fista_stop, cfg.max_iter);
    const double warm_seconds = now_seconds() - t_warm0;

    SolverConfig scfg;
    scfg.lambda = cfg.lambda;
    scfg.mu = cfg.mu;
    scfg.omega = cfg.omega;
    scfg.max_iter = cfg.max_iter;
    scfg.stop = cfg.stop;
    scfg.nmapg_eta = cfg.nmapg_eta;

    for (Method m : cfg.methods) {
      MethodRun run;
      run.method = m;
      const double t0 = now_seconds();
      run.result = run_method(m, obj, box, scfg, warm.x);
      run.seconds = (now_seconds() - t0) + warm_seconds;
      run.warm_iters = warm.iterations;
      run.iters_total = run.result.iterations + warm.iterations;
      run.relerr = relative_error(run.result.x, inst.x_true);
      run.l0 = l0_norm(run.result.x);
      out.runs.push_back(std::move(run));
    }
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
    out.runs.clear();
  }
  return out;
}

}  // namespace

std::vector<ReplicateResult> run_cs_replicates(const CsSuiteConfig& cfg) {
  if (cfg.replicates <= 0) throw std::invalid_argument("run_cs_replicates: replicates must be > 0");
  if (cfg.sizes.empty()) throw std::invalid_argument("run_cs_replicates: no (n, s) cells");

  struct Task {
    int n, s, rep;
  };
  std::vector<Task> tasks;
  for (const auto& [n, s] : cfg.sizes) {
    for (int r = 0; r < cfg.replicates; ++r) tasks.push_back({n, s, r});
  }

  std::vector<ReplicateResult> results(tasks.size());
  int workers = cfg.workers > 0 ? cfg.workers
                                : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min<int>(workers, static_cast<int>(tasks.size()));

  if (workers == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      results[i] = run_cs_replicate(cfg, tasks[i].n, tasks[i].s, tasks[i].rep);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
          results[i] = run_cs_replicate(cfg, tasks[i].n, tasks[i].s, tasks[i].rep);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return results;
}

ExperimentReport aggregate_report(const std::vector<Method>& methods,
                                  const std::vector<ReplicateResult>& reps) {
  ExperimentReport report;

  std::vector<std::pair<int, int>> cells;
  for (const auto& r : reps) {
    if (std::find(cells.begin(), cells.end(), std::make_pair(r.n, r.s)) == cells.end()) {
      cells.emplace_back(r.n, r.s);
    }
    if (r.failed) {
      report.failures.push_back("n=" + std::to_string(r.n) + ",s=" + std::to_string(r.s) +
                                ",replicate=" + std::to_string(r.replicate) + ": " + r.error);
    }
  }
  std::sort(cells.begin(), cells.end());

  for (Method m : methods) {
    for (const auto& [n, s] : cells) {
      std::vector<double> iters, times, relerrs, l0s, ncfs, ncgfs, restarts;
      for (const auto& r : reps) {
        if (r.failed || r.n != n || r.s != s) continue;
        for (const auto& run : r.runs) {
          if (run.method != m) continue;
          iters.push_back(run.iters_total);
          times.push_back(run.seconds);
          relerrs.push_back(run.relerr);
          l0s.push_back(run.l0);
          ncfs.push_back(static_cast<double>(run.result.total_ncf()));
          ncgfs.push_back(static_cast<double>(run.result.total_ncgf()));
          restarts.push_back(run.result.restart_rate());
        }
      }
      if (iters.empty()) continue;
      ExperimentRow row;
      row.method = method_name(m);
      row.n = n;
      row.s = s;
      row.iters_mean = sample_mean(iters);
      row.iters_std = sample_std(iters);
      row.time_mean = sample_mean(times);
      row.time_std = sample_std(times);
      row.relerr_mean = sample_mean(relerrs);
      row.relerr_std = sample_std(relerrs);
      row.l0_mean = sample_mean(l0s);
      row.ncf_total_mean = sample_mean(ncfs);
      row.ncgf_total_mean = sample_mean(ncgfs);
      row.restart_rate = sample_mean(restarts);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

ExperimentReport run_cs_suite(const CsSuiteConfig& cfg) {
  return aggregate_report(cfg.methods, run_cs_replicates(cfg));
}

LogRegDataset gen_synthetic_logreg(int N, int n, int s_true, double margin,
                                   std::uint64_t seed) {
  if (N <= 0 || n <= 0) throw std::invalid_argument("gen_synthetic_logreg: N, n must be > 0");
  if (s_true < 0 || s_true > n) throw std::invalid_argument("gen_synthetic_logreg: s_true range");
  if (margin < 0.0) throw std::invalid_argument("gen_synthetic_logreg: negative margin");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  LogRegDataset data;
  data.s_true = s_true;
  data.w_true = Eigen::VectorXd::Zero(n + 1);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int k = 0; k < s_true; ++k) {
    std::uniform_int_distribution<int> pick(k, n - 1);
    std::swap(idx[k], idx[pick(rng)]);
    data.w_true[idx[k]] = coin(rng) ? 1.0 : -1.0;
  }
  // intercept-only labels when the hyperplane is empty
  if (s_true == 0) data.w_true[n] = 0.3;

  auto fill = [&](Eigen::MatrixXd& X, Eigen::VectorXd& y, int count) {
    X.resize(count, n);
    y.resize(count);
    Eigen::VectorXd sample(n);
    for (int i = 0; i < count; ++i) {
      double margin_val = 0.0;
      do {
        for (int j = 0; j < n; ++j) sample[j] = gauss(rng);
        margin_val = data.w_true.head(n).dot(sample) + data.w_true[n];
      } while (std::abs(margin_val) < margin && s_true > 0);
      X.row(i) = sample;
      y[i] = margin_val >= 0.0 ? 1.0 : -1.0;
    }
  };
  fill(data.X_train, data.y_train, N);
  fill(data.X_test, data.y_test, std::max(1, N / 5));
  return data;
}

double classification_accuracy(const Eigen::Ref<const Eigen::MatrixXd>& X,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               const Eigen::Ref<const Eigen::VectorXd>& w) {
  if (X.cols() + 1 != w.size() || X.rows() != y.size()) {
    throw std::invalid_argument("classification_accuracy: dimension mismatch");
  }
  Eigen::VectorXd margins = X * w.head(X.cols());
  margins.array() += w[X.cols()];
  int correct = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double pred = margins[i] >= 0.0 ? 1.0 : -1.0;
    if (pred == y[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(y.size());
}

std::vector<LogRegRun> run_logreg_methods(const LogRegDataset& data,
                                          const LogRegSuiteConfig& cfg) {
  LogisticObjective obj(data.X_train, data.y_train, splitmix64(cfg.seed));
  const Eigen::Index dim = obj.dimension();
  const BoxConstraint box = BoxConstraint::uniform(dim, -cfg.box_bound, cfg.box_bound);

  const double t_warm0 = now_seconds();
  FistaResult warm = fista_l1(obj, cfg.fista_lambda1, Eigen::VectorXd::Zero(dim),
                              cfg.fista_stop, cfg.max_iter);
  const double warm_seconds = now_seconds() - t_warm0;

  SolverConfig scfg;
  scfg.lambda = cfg.lambda;
  scfg.mu = cfg.mu;
  scfg.omega = cfg.omega;
  scfg.max_iter = cfg.max_iter;
  scfg.stop = cfg.stop;
  scfg.nmapg_eta = cfg.nmapg_eta;
  scfg.penalized.assign(static_cast<std::size_t>(dim), 1);
  scfg.penalized.back() = 0;  // the intercept is unpenalized

  std::vector<LogRegRun> runs;
  for (Method m : cfg.methods) {
    LogRegRun run;
    run.method = m;
    const double t0 = now_seconds();
    run.result = run_method(m, obj, box, scfg, warm.x);
    run.seconds = (now_seconds() - t0) + warm_seconds;
    run.warm_iters = warm.iterations;
    run.iters_total = run.result.iterations + warm.iterations;
    run.accuracy = classification_accuracy(data.X_test, data.y_test, run.result.x);
    run.l0 = l0_norm(run.result.x.head(dim - 1));
    runs.push_back(std::move(run));
  }
  return runs;
}

ExperimentReport aggregate_logreg_report(const LogRegDataset& data,
                                         const std::vector<LogRegRun>& runs) {
  ExperimentReport report;
  const int n = static_cast<int>(data.X_train.cols());
  for (const auto& run : runs) {
    ExperimentRow row;
    row.method = method_name(run.method);
    row.n = n;
    row.s = data.s_true;
    row.iters_mean = run.iters_total;
    row.time_mean = run.seconds;
    if (data.w_true.size() > 0 && data.w_true.head(n).norm() > 0.0) {
      row.relerr_mean = relative_error(run.result.x.head(n), data.w_true.head(n));
    }
    row.l0_mean = run.l0;
    row.ncf_total_mean = static_cast<double>(run.result.total_ncf());
    row.ncgf_total_mean = static_cast<double>(run.result.total_ncgf());
    row.restart_rate = run.result.restart_rate();
    report.rows.push_back(std::move(row));
  }
  return report;
}

ExperimentReport run_logreg_suite(const LogRegDataset& data, const LogRegSuiteConfig& cfg) {
  try {
    return aggregate_logreg_report(data, run_logreg_methods(data, cfg));
  } catch (const std::exception& e) {
    ExperimentReport report;
    report.failures.push_back(std::string("logreg: ") + e.what());
    return report;
  }
}

}  // namespace l0
