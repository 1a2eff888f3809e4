#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <set>

#include "l0pack/bench.hpp"
#include "l0pack/objectives.hpp"

TEST_SUITE_BEGIN("bench");

TEST_CASE("method name round trip") {
  for (l0::Method m : l0::all_methods()) {
    auto parsed = l0::parse_method(l0::method_name(m));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == m);
  }
  CHECK_FALSE(l0::parse_method("ihtish").has_value());
}

TEST_CASE("generated instances have unit columns and the requested sparsity") {
  l0::CsInstance inst = l0::gen_cs_instance(50, 80, 5, 0.05, 7);
  REQUIRE(inst.A.rows() == 50);
  REQUIRE(inst.A.cols() == 80);
  for (int j = 0; j < inst.A.cols(); ++j) {
    CHECK(inst.A.col(j).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  int nnz = 0;
  for (int i = 0; i < inst.x_true.size(); ++i) {
    if (inst.x_true[i] != 0.0) {
      ++nnz;
      CHECK(std::abs(inst.x_true[i]) == 1.0);
    }
  }
  CHECK(nnz == 5);
  CHECK(inst.b.size() == 50);
}

TEST_CASE("zero noise gives b = A x_true exactly") {
  l0::CsInstance inst = l0::gen_cs_instance(30, 40, 4, 0.0, 11);
  CHECK((inst.b - inst.A * inst.x_true).norm() == 0.0);
}

TEST_CASE("same seed reproduces the instance bitwise, different seed does not") {
  l0::CsInstance a = l0::gen_cs_instance(25, 30, 3, 0.05, 13);
  l0::CsInstance b = l0::gen_cs_instance(25, 30, 3, 0.05, 13);
  CHECK(a.A == b.A);
  CHECK(a.b == b.b);
  CHECK(a.x_true == b.x_true);
  l0::CsInstance c = l0::gen_cs_instance(25, 30, 3, 0.05, 14);
  CHECK(a.A != c.A);
}

TEST_CASE("relative error and l0 norm") {
  Eigen::VectorXd t(3), x(3);
  t << 1, 0, -1;
  x << 1, 0, -1;
  CHECK(l0::relative_error(x, t) == 0.0);
  x << 2, 0, -1;
  CHECK(l0::relative_error(x, t) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(l0::l0_norm(t) == 2);
  CHECK(l0::l0_norm(Eigen::VectorXd::Zero(4)) == 0);
  CHECK_THROWS_AS(l0::relative_error(x, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("per-replicate seeds differ across cells and replicates") {
  std::set<std::uint64_t> seen;
  for (int n : {100, 200}) {
    for (int s : {2, 4}) {
      for (int rep = 0; rep < 5; ++rep) {
        seen.insert(l0::derive_seed(42, n, s, rep));
      }
    }
  }
  CHECK(seen.size() == 20);
  CHECK(l0::derive_seed(42, 100, 2, 0) == l0::derive_seed(42, 100, 2, 0));
  CHECK(l0::derive_seed(42, 100, 2, 0) != l0::derive_seed(43, 100, 2, 0));
}

TEST_CASE("tiny suite run is deterministic apart from timing") {
  l0::CsSuiteConfig cfg;
  cfg.m = 30;
  cfg.sizes = {{60, 2}};
  cfg.replicates = 2;
  cfg.seed = 5;
  cfg.max_iter = 2000;
  cfg.methods = {l0::Method::Piht, l0::Method::Apiht};
  const std::vector<l0::Method>& methods = cfg.methods;

  auto reps1 = l0::run_cs_replicates(cfg);
  auto reps2 = l0::run_cs_replicates(cfg);
  REQUIRE(reps1.size() == reps2.size());
  for (size_t i = 0; i < reps1.size(); ++i) {
    REQUIRE(reps1[i].runs.size() == reps2[i].runs.size());
    CHECK(reps1[i].seed == reps2[i].seed);
    for (size_t j = 0; j < reps1[i].runs.size(); ++j) {
      CHECK(reps1[i].runs[j].result.x == reps2[i].runs[j].result.x);
      CHECK(reps1[i].runs[j].iters_total == reps2[i].runs[j].iters_total);
      CHECK(reps1[i].runs[j].relerr == reps2[i].runs[j].relerr);
    }
  }

  l0::ExperimentReport rep = l0::aggregate_report(methods, reps1);
  REQUIRE(rep.rows.size() == methods.size());
  CHECK(rep.failures.empty());
  for (const auto& row : rep.rows) {
    CHECK(row.n == 60);
    CHECK(row.s == 2);
    CHECK(row.iters_mean > 0.0);
    CHECK(std::isfinite(row.relerr_mean));
  }
}

TEST_CASE("aggregate rows come out sorted by method, n, s") {
  l0::CsSuiteConfig cfg;
  cfg.m = 25;
  cfg.sizes = {{50, 2}, {40, 2}};
  cfg.replicates = 1;
  cfg.seed = 9;
  cfg.max_iter = 2000;
  cfg.methods = {l0::Method::Apiht, l0::Method::Piht};
  auto reps = l0::run_cs_replicates(cfg);
  l0::ExperimentReport rep = l0::aggregate_report(cfg.methods, reps);
  REQUIRE(rep.rows.size() == 4);
  for (size_t i = 1; i < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i - 1];
    const auto& b = rep.rows[i];
    CHECK(std::tie(a.method, a.n, a.s) < std::tie(b.method, b.n, b.s));
  }
}

TEST_CASE("synthetic logistic data is deterministic and respects its sparsity") {
  l0::LogRegDataset d1 = l0::gen_synthetic_logreg(120, 40, 6, 0.1, 77);
  l0::LogRegDataset d2 = l0::gen_synthetic_logreg(120, 40, 6, 0.1, 77);
  CHECK(d1.X_train == d2.X_train);
  CHECK(d1.y_train == d2.y_train);
  CHECK(d1.w_true == d2.w_true);
  REQUIRE(d1.w_true.size() == 41);  // intercept appended last

  int nnz = 0;
  for (int i = 0; i < 40; ++i) {
    if (d1.w_true[i] != 0.0) {
      ++nnz;
      CHECK(std::abs(d1.w_true[i]) == 1.0);
    }
  }
  CHECK(nnz == 6);

  // labels must be separated by the planted model with the requested margin
  for (int i = 0; i < d1.X_train.rows(); ++i) {
    const double m =
        d1.y_train[i] * (d1.X_train.row(i).dot(d1.w_true.head(40)) + d1.w_true[40]);
    CHECK(m >= 0.1 - 1e-12);
  }
  CHECK(d1.X_test.rows() == 120 / 5);
}

TEST_CASE("classification accuracy on a hand-built set") {
  Eigen::MatrixXd X(2, 1);
  X << 1.0, -1.0;
  Eigen::VectorXd y(2);
  y << 1.0, -1.0;
  Eigen::VectorXd w(2);
  w << 1.0, 0.0;  // weight then intercept
  CHECK(l0::classification_accuracy(X, y, w) == 1.0);
  w << -1.0, 0.0;
  CHECK(l0::classification_accuracy(X, y, w) == 0.0);
}

TEST_SUITE_END();
