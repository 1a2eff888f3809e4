#include "l0pack/io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace l0 {

namespace {

constexpr char kMagic[4] = {'L', '0', 'P', 'K'};
constexpr std::uint32_t kVersion = 1;

std::uint32_t read_u32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (!in) throw IoError(IoErrorCode::Truncated, "truncated header");
  return static_cast<std::uint32_t>(buf[0]) | (static_cast<std::uint32_t>(buf[1]) << 8) |
         (static_cast<std::uint32_t>(buf[2]) << 16) | (static_cast<std::uint32_t>(buf[3]) << 24);
}

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char buf[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<char*>(buf), 4);
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

Eigen::MatrixXd load_dense_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoErrorCode::OpenFailed, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError(IoErrorCode::BadMagic, path + ": bad magic");
  }
  const std::uint32_t version = read_u32(in);
  if (version != kVersion) {
    throw IoError(IoErrorCode::BadFormat, path + ": unsupported version");
  }
  const std::uint64_t rows = read_u32(in);
  const std::uint64_t cols = read_u32(in);
  if (rows * cols > (1ULL << 33)) {
    throw IoError(IoErrorCode::DimensionOverflow, path + ": dimensions too large");
  }
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m(
      static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(rows * cols * sizeof(double))) {
    throw IoError(IoErrorCode::Truncated, path + ": truncated payload");
  }
  return m;
}

void save_dense_matrix(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (m.rows() > 0xffffffffLL || m.cols() > 0xffffffffLL) {
    throw IoError(IoErrorCode::DimensionOverflow, path + ": dimensions exceed format");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(IoErrorCode::OpenFailed, "cannot open " + path + " for writing");
  out.write(kMagic, 4);
  write_u32(out, kVersion);
  write_u32(out, static_cast<std::uint32_t>(m.rows()));
  write_u32(out, static_cast<std::uint32_t>(m.cols()));
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  out.write(reinterpret_cast<const char*>(rm.data()),
            static_cast<std::streamsize>(rm.size() * sizeof(double)));
  if (!out) throw IoError(IoErrorCode::WriteFailed, path + ": write failed");
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> load_libsvm(const std::string& path,
                                                        Eigen::Index n_features_hint,
                                                        std::size_t max_cells) {
  std::ifstream in(path);
  if (!in) throw IoError(IoErrorCode::OpenFailed, "cannot open " + path);

  std::vector<double> labels;
  std::vector<std::vector<std::pair<Eigen::Index, double>>> rows;
  Eigen::Index n_features = n_features_hint;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // strip comments and blank lines
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;

    double label;
    try {
      std::size_t used = 0;
      label = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw IoError(IoErrorCode::BadFormat,
                    path + ":" + std::to_string(lineno) + ": unparsable label '" + tok + "'");
    }
    if (label == 0.0) label = -1.0;  // {0,1} labels remap to {-1,+1}
    if (label != 1.0 && label != -1.0) {
      throw IoError(IoErrorCode::UnknownLabel,
                    path + ":" + std::to_string(lineno) + ": unknown label value");
    }

    std::vector<std::pair<Eigen::Index, double>> row;
    Eigen::Index prev_idx = 0;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) {
        throw IoError(IoErrorCode::BadFormat,
                      path + ":" + std::to_string(lineno) + ": expected index:value, got '" +
                          tok + "'");
      }
      Eigen::Index idx;
      double val;
      try {
        std::size_t used = 0;
        idx = static_cast<Eigen::Index>(std::stoll(tok.substr(0, colon), &used));
        if (used != colon) throw std::invalid_argument(tok);
        const std::string vs = tok.substr(colon + 1);
        val = std::stod(vs, &used);
        if (used != vs.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw IoError(IoErrorCode::BadFormat, path + ":" + std::to_string(lineno) +
                                                  ": unparsable token '" + tok + "'");
      }
      if (idx <= prev_idx) {
        throw IoError(IoErrorCode::NonIncreasingIndex,
                      path + ":" + std::to_string(lineno) + ": indices not increasing");
      }
      prev_idx = idx;
      n_features = std::max(n_features, idx);
      row.emplace_back(idx - 1, val);
    }
    labels.push_back(label);
    rows.push_back(std::move(row));
  }

  const std::size_t cells = rows.size() * static_cast<std::size_t>(n_features);
  if (cells > max_cells) {
    throw IoError(IoErrorCode::TooLarge, path + ": densified size exceeds cap");
  }
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), n_features);
  Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    y[static_cast<Eigen::Index>(i)] = labels[i];
    for (const auto& [j, v] : rows[i]) X(static_cast<Eigen::Index>(i), j) = v;
  }
  return {std::move(X), std::move(y)};
}

namespace {

std::vector<ExperimentRow> sorted_rows(const ExperimentReport& report) {
  std::vector<ExperimentRow> rows = report.rows;
  std::sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
    return std::tie(a.method, a.n, a.s) < std::tie(b.method, b.n, b.s);
  });
  return rows;
}

}  // namespace

void write_report_csv(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(IoErrorCode::OpenFailed, "cannot open " + path + " for writing");
  out << "method,n,s,iters_mean,iters_std,time_mean,time_std,relerr_mean,relerr_std,"
         "l0_mean,ncf_total_mean,ncgf_total_mean,restart_rate\n";
  for (const auto& r : sorted_rows(report)) {
    out << r.method << ',' << r.n << ',' << r.s << ',' << fmt6(r.iters_mean) << ','
        << fmt6(r.iters_std) << ',' << fmt6(r.time_mean) << ',' << fmt6(r.time_std) << ','
        << fmt6(r.relerr_mean) << ',' << fmt6(r.relerr_std) << ',' << fmt6(r.l0_mean) << ','
        << fmt6(r.ncf_total_mean) << ',' << fmt6(r.ncgf_total_mean) << ','
        << fmt6(r.restart_rate) << '\n';
  }
  if (!out) throw IoError(IoErrorCode::WriteFailed, path + ": write failed");
}

void write_report_json(const ExperimentReport& report, const std::string& path) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : sorted_rows(report)) {
    rows.push_back({{"method", r.method},
                    {"n", r.n},
                    {"s", r.s},
                    {"iters_mean", r.iters_mean},
                    {"iters_std", r.iters_std},
                    {"time_mean", r.time_mean},
                    {"time_std", r.time_std},
                    {"relerr_mean", r.relerr_mean},
                    {"relerr_std", r.relerr_std},
                    {"l0_mean", r.l0_mean},
                    {"ncf_total_mean", r.ncf_total_mean},
                    {"ncgf_total_mean", r.ncgf_total_mean},
                    {"restart_rate", r.restart_rate}});
  }
  nlohmann::json doc = {{"rows", rows}, {"failures", report.failures}};
  std::ofstream out(path);
  if (!out) throw IoError(IoErrorCode::OpenFailed, "cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError(IoErrorCode::WriteFailed, path + ": write failed");
}

ExperimentReport read_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(IoErrorCode::OpenFailed, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(IoErrorCode::BadFormat, path + ": " + e.what());
  }
  ExperimentReport report;
  for (const auto& j : doc.at("rows")) {
    ExperimentRow r;
    r.method = j.at("method").get<std::string>();
    r.n = j.at("n").get<int>();
    r.s = j.at("s").get<int>();
    r.iters_mean = j.at("iters_mean").get<double>();
    r.iters_std = j.at("iters_std").get<double>();
    r.time_mean = j.at("time_mean").get<double>();
    r.time_std = j.at("time_std").get<double>();
    r.relerr_mean = j.at("relerr_mean").get<double>();
    r.relerr_std = j.at("relerr_std").get<double>();
    r.l0_mean = j.at("l0_mean").get<double>();
    r.ncf_total_mean = j.at("ncf_total_mean").get<double>();
    r.ncgf_total_mean = j.at("ncgf_total_mean").get<double>();
    r.restart_rate = j.at("restart_rate").get<double>();
    report.rows.push_back(std::move(r));
  }
  for (const auto& f : doc.at("failures")) report.failures.push_back(f.get<std::string>());
  return report;
}

}  // namespace l0
