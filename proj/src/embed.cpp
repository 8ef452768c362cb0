#include "cissa/embed.hpp"

#include "cissa/error.hpp"

#include <cmath>

namespace cissa {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::LagOutOfRange: return "LagOutOfRange";
    case ErrorCode::VariantMismatch: return "VariantMismatch";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::EmptyGrouping: return "EmptyGrouping";
    case ErrorCode::InvalidGrouping: return "InvalidGrouping";
    case ErrorCode::NotMonthlyCompatible: return "NotMonthlyCompatible";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::DegenerateRegressor: return "DegenerateRegressor";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ColumnMissing: return "ColumnMissing";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::NonMonotoneDates: return "NonMonotoneDates";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

void require_finite(std::span<const double> values) {
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (!std::isfinite(values[t])) {
      throw Error(ErrorCode::NonFiniteInput, "value at index " + std::to_string(t) + " is not finite");
    }
  }
}

void require_window(std::size_t series_length, std::size_t window_length) {
  // 1 < L < T/2, written without division so odd T is handled exactly.
  if (window_length <= 1 || 2 * window_length >= series_length) {
    throw Error(ErrorCode::WindowOutOfRange,
                "window length " + std::to_string(window_length) + " must satisfy 1 < L < T/2 with T = " +
                    std::to_string(series_length));
  }
}

TrajectoryMatrix embed(std::span<const double> series, std::size_t window_length) {
  require_window(series.size(), window_length);
  require_finite(series);
  const auto rows = static_cast<Eigen::Index>(window_length);
  const auto cols = static_cast<Eigen::Index>(series.size() - window_length + 1);
  TrajectoryMatrix out{Eigen::MatrixXd(rows, cols)};
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      out.entries(i, j) = series[static_cast<std::size_t>(i + j)];
    }
  }
  return out;
}

std::vector<double> diagonal_average(const Eigen::Ref<const Eigen::MatrixXd>& matrix) {
  const Eigen::Index rows = matrix.rows();
  const Eigen::Index cols = matrix.cols();
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::EmptyMatrix, "diagonal averaging needs a non-empty matrix");
  }
  const auto length = static_cast<std::size_t>(rows + cols - 1);
  std::vector<double> sums(length, 0.0);
  std::vector<double> counts(length, 0.0);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const auto t = static_cast<std::size_t>(i + j);
      sums[t] += matrix(i, j);
      counts[t] += 1.0;
    }
  }
  for (std::size_t t = 0; t < length; ++t) sums[t] /= counts[t];
  return sums;
}

std::vector<double> diagonal_average_outer(const Eigen::Ref<const Eigen::VectorXd>& a,
                                           const Eigen::Ref<const Eigen::VectorXd>& b) {
  const Eigen::Index rows = a.size();
  const Eigen::Index cols = b.size();
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::EmptyMatrix, "diagonal averaging needs a non-empty matrix");
  }
  const Eigen::Index length = rows + cols - 1;
  std::vector<double> out(static_cast<std::size_t>(length), 0.0);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double bj = b[j];
    double* dst = out.data() + j;
    for (Eigen::Index i = 0; i < rows; ++i) dst[i] += a[i] * bj;
  }
  // Antidiagonal t holds min(t+1, rows, cols, length-t) entries.
  const Eigen::Index shorter = std::min(rows, cols);
  for (Eigen::Index t = 0; t < length; ++t) {
    const Eigen::Index count = std::min({t + 1, shorter, length - t});
    out[static_cast<std::size_t>(t)] /= static_cast<double>(count);
  }
  return out;
}

}  // namespace cissa
