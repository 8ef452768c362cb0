#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cissa {

/// A finite real-valued sequence x_1..x_T (stored 0-based).
struct TimeSeries {
  std::vector<double> values;
  std::string label;

  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> v, std::string name = {})
      : values(std::move(v)), label(std::move(name)) {}

  std::size_t size() const noexcept { return values.size(); }
  std::span<const double> view() const noexcept { return values; }
};

/// L x N Hankel matrix of lagged subseries, N = T - L + 1.
struct TrajectoryMatrix {
  Eigen::MatrixXd entries;

  std::size_t window_length() const noexcept { return static_cast<std::size_t>(entries.rows()); }
  std::size_t num_columns() const noexcept { return static_cast<std::size_t>(entries.cols()); }
};

/// Throws NonFiniteInput if any value is NaN or infinite.
void require_finite(std::span<const double> values);

/// Throws WindowOutOfRange unless 1 < L < T/2.
void require_window(std::size_t series_length, std::size_t window_length);

/// entries(i, j) = x[i + j] with 0-based i < L, j < N.
TrajectoryMatrix embed(std::span<const double> series, std::size_t window_length);
inline TrajectoryMatrix embed(const TimeSeries& series, std::size_t window_length) {
  return embed(series.view(), window_length);
}

/// Hankelization: entry t of the result is the mean of matrix(i, j) over i + j = t.
std::vector<double> diagonal_average(const Eigen::Ref<const Eigen::MatrixXd>& matrix);

/// Diagonal average of the rank-one matrix a b' without forming it.
std::vector<double> diagonal_average_outer(const Eigen::Ref<const Eigen::VectorXd>& a,
                                           const Eigen::Ref<const Eigen::VectorXd>& b);

}  // namespace cissa
