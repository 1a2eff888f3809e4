#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace l0 {

enum class IoErrorCode {
  OpenFailed,
  BadMagic,
  Truncated,
  DimensionOverflow,
  BadFormat,
  NonIncreasingIndex,
  UnknownLabel,
  TooLarge,
  WriteFailed,
};

class IoError : public std::runtime_error {
 public:
  IoError(IoErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  IoErrorCode code() const { return code_; }

 private:
  IoErrorCode code_;
};

// Dense binary matrix format: magic "L0PK", u32 version, u32 rows, u32 cols,
// then rows*cols row-major little-endian f64. Round trip is bitwise identity.
Eigen::MatrixXd load_dense_matrix(const std::string& path);
void save_dense_matrix(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& m);

// LIBSVM text format: "label idx:val idx:val ..." with strictly increasing
// 1-based indices. Labels {0,1} are remapped to {-1,+1}. Densifies up to
// max_cells entries.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> load_libsvm(const std::string& path,
                                                        Eigen::Index n_features_hint = 0,
                                                        std::size_t max_cells = 200000000);

struct ExperimentRow {
  std::string method;
  int n = 0;
  int s = 0;
  double iters_mean = 0, iters_std = 0;
  double time_mean = 0, time_std = 0;
  double relerr_mean = 0, relerr_std = 0;
  double l0_mean = 0;
  double ncf_total_mean = 0, ncgf_total_mean = 0;
  double restart_rate = 0;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::vector<std::string> failures;
};

// Columns: method,n,s,iters_mean,iters_std,time_mean,time_std,relerr_mean,
// relerr_std,l0_mean,ncf_total_mean,ncgf_total_mean,restart_rate.
// Floats with 6 significant digits, rows sorted by (method, n, s).
void write_report_csv(const ExperimentReport& report, const std::string& path);
void write_report_json(const ExperimentReport& report, const std::string& path);
ExperimentReport read_report_json(const std::string& path);

}  // namespace l0
