#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "l0pack/io.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() /
          ("l0pack_io_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("dense matrix round trip is bitwise") {
  TempDir tmp;
  Eigen::MatrixXd m(3, 2);
  m << 1.5, -0.25, 3e-300, 0.0, -1e300, 42.0;
  const std::string p = tmp.path("m.l0pk");
  l0::save_dense_matrix(p, m);
  Eigen::MatrixXd back = l0::load_dense_matrix(p);
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 2);
  CHECK(std::memcmp(m.data(), back.data(), sizeof(double) * 6) == 0);

  l0::save_dense_matrix(p, back);
  CHECK(slurp(p).size() == 4 + 4 + 4 + 4 + 6 * 8);
}

TEST_CASE("vectors survive the round trip") {
  TempDir tmp;
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(7, -3.0, 3.0);
  const std::string p = tmp.path("v.l0pk");
  l0::save_dense_matrix(p, v);
  Eigen::MatrixXd back = l0::load_dense_matrix(p);
  REQUIRE(back.cols() == 1);
  CHECK(back.col(0) == v);
}

TEST_CASE("dense loader rejects bad input with the right error codes") {
  TempDir tmp;
  const std::string p = tmp.path("bad.l0pk");

  CHECK_THROWS_AS(l0::load_dense_matrix(tmp.path("missing.l0pk")), l0::IoError);
  try {
    l0::load_dense_matrix(tmp.path("missing.l0pk"));
  } catch (const l0::IoError& e) {
    CHECK(e.code() == l0::IoErrorCode::OpenFailed);
  }

  spit(p, "NOPE\x01\x00\x00\x00");
  try {
    l0::load_dense_matrix(p);
    FAIL("expected BadMagic");
  } catch (const l0::IoError& e) {
    CHECK(e.code() == l0::IoErrorCode::BadMagic);
  }

  // valid header claiming 2x2 but only one payload double
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  l0::save_dense_matrix(p, m);
  std::string raw = slurp(p);
  spit(p, raw.substr(0, raw.size() - 8));
  try {
    l0::load_dense_matrix(p);
    FAIL("expected Truncated");
  } catch (const l0::IoError& e) {
    CHECK(e.code() == l0::IoErrorCode::Truncated);
  }

  // header with an absurd element count
  std::string huge = raw.substr(0, 8);
  const std::uint32_t big = 0xffffffffu;
  huge.append(reinterpret_cast<const char*>(&big), 4);
  huge.append(reinterpret_cast<const char*>(&big), 4);
  spit(p, huge);
  try {
    l0::load_dense_matrix(p);
    FAIL("expected DimensionOverflow");
  } catch (const l0::IoError& e) {
    CHECK(e.code() == l0::IoErrorCode::DimensionOverflow);
  }
}

TEST_CASE("libsvm loader handles sparse rows, comments, and label remapping") {
  TempDir tmp;
  const std::string p = tmp.path("data.libsvm");
  spit(p,
       "# header comment\n"
       "+1 1:0.5 3:2\n"
       "0 2:-1.25   # trailing comment\n"
       "\n"
       "-1 4:7\n");
  auto [X, y] = l0::load_libsvm(p);
  REQUIRE(X.rows() == 3);
  REQUIRE(X.cols() == 4);
  CHECK(X(0, 0) == 0.5);
  CHECK(X(0, 2) == 2.0);
  CHECK(X(0, 1) == 0.0);
  CHECK(X(1, 1) == -1.25);
  CHECK(X(2, 3) == 7.0);
  CHECK(y(0) == 1.0);
  CHECK(y(1) == -1.0);  // label 0 remapped
  CHECK(y(2) == -1.0);

  auto [Xw, yw] = l0::load_libsvm(p, 6);
  CHECK(Xw.cols() == 6);
  CHECK(yw == y);
}

TEST_CASE("libsvm loader rejects malformed rows") {
  TempDir tmp;
  const std::string p = tmp.path("bad.libsvm");

  spit(p, "+1 3:1 2:5\n");
  try {
    l0::load_libsvm(p);
    FAIL("expected NonIncreasingIndex");
  } catch (const l0::IoError& e) {
    CHECK(e.code() == l0::IoErrorCode::NonIncreasingIndex);
  }

  spit(p, "+1 0:1\n");
  CHECK_THROWS_AS(l0::load_libsvm(p), l0::IoError);

  spit(p, "+1 1:notanumber\n");
  try {
    l0::load_libsvm(p);
    FAIL("expected BadFormat");
  } catch (const l0::IoError& e) {
    CHECK(e.code() == l0::IoErrorCode::BadFormat);
  }

  spit(p, "2 1:1\n");
  try {
    l0::load_libsvm(p);
    FAIL("expected UnknownLabel");
  } catch (const l0::IoError& e) {
    CHECK(e.code() == l0::IoErrorCode::UnknownLabel);
  }

  spit(p, "+1 1000000:1\n");
  try {
    l0::load_libsvm(p, 0, /*max_cells=*/100);
    FAIL("expected TooLarge");
  } catch (const l0::IoError& e) {
    CHECK(e.code() == l0::IoErrorCode::TooLarge);
  }
}

TEST_CASE("report csv has exactly the declared columns") {
  TempDir tmp;
  const std::string p = tmp.path("report.csv");

  l0::ExperimentReport empty;
  l0::write_report_csv(empty, p);
  CHECK(slurp(p) ==
        "method,n,s,iters_mean,iters_std,time_mean,time_std,relerr_mean,"
        "relerr_std,l0_mean,ncf_total_mean,ncgf_total_mean,restart_rate\n");

  l0::ExperimentRow row;
  row.method = "apiht";
  row.n = 2000;
  row.s = 20;
  row.iters_mean = 33.9;
  row.iters_std = 2.5;
  row.time_mean = 0.1234567;
  row.time_std = 0.01;
  row.relerr_mean = 0.0456;
  row.relerr_std = 0.001;
  row.l0_mean = 20.0;
  row.ncf_total_mean = 0.0;
  row.ncgf_total_mean = 40.0;
  row.restart_rate = 0.08;
  l0::ExperimentReport rep;
  rep.rows.push_back(row);
  l0::write_report_csv(rep, p);
  const std::string text = slurp(p);
  std::istringstream lines(text);
  std::string header, data;
  std::getline(lines, header);
  std::getline(lines, data);
  CHECK(data.substr(0, 14) == "apiht,2000,20,");
  size_t commas = static_cast<size_t>(std::count(data.begin(), data.end(), ','));
  CHECK(commas == 12);
}

TEST_CASE("report json round trips rows and failures") {
  TempDir tmp;
  const std::string p = tmp.path("report.json");
  l0::ExperimentReport rep;
  l0::ExperimentRow row;
  row.method = "piht";
  row.n = 100;
  row.s = 5;
  row.iters_mean = 55.0;
  row.relerr_mean = 0.123;
  row.restart_rate = 0.0;
  rep.rows.push_back(row);
  rep.failures.push_back("n=100 s=5 rep=3: solver blew up");

  l0::write_report_json(rep, p);
  l0::ExperimentReport back = l0::read_report_json(p);
  REQUIRE(back.rows.size() == 1);
  CHECK(back.rows[0].method == "piht");
  CHECK(back.rows[0].n == 100);
  CHECK(back.rows[0].s == 5);
  CHECK(back.rows[0].iters_mean == 55.0);
  CHECK(back.rows[0].relerr_mean == 0.123);
  REQUIRE(back.failures.size() == 1);
  CHECK(back.failures[0] == "n=100 s=5 rep=3: solver blew up");
}

TEST_SUITE_END();
