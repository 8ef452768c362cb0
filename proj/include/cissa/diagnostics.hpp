#pragma once

#include "cissa/ssa.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cissa {

/// diag(1, 2, ..., L, ..., L, ..., 2, 1) of length T; entry t counts the cells on antidiagonal t.
std::vector<double> w_weights(std::size_t series_length, std::size_t window_length);

double w_inner_product(std::span<const double> x1, std::span<const double> x2, std::span<const double> weights);

/// <x1, x2>_w / (||x1||_w ||x2||_w). Throws ZeroNorm if either norm vanishes.
double w_correlation(std::span<const double> x1, std::span<const double> x2, std::size_t window_length);

struct WCorrelationMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd entries;   // NaN where a pair involves a w-null series
  Eigen::MatrixXd absolute;  // |entries|, for heat-map rendering
  std::vector<double> weights;
};

WCorrelationMatrix w_correlation_matrix(const std::vector<std::vector<double>>& series,
                                        const std::vector<std::string>& labels, std::size_t window_length);
WCorrelationMatrix w_correlation_matrix(const Decomposition& d);

struct RegressionCheck {
  std::string label;
  double intercept = 0.0;
  double slope = 0.0;
};

/// OLS of the true component on the extracted one: y = a + b * yhat + u.
RegressionCheck regression_check(std::span<const double> true_component, std::span<const double> extracted,
                                 std::string label = {});

struct AR1Fit {
  double mean = 0.0;
  double stddev = 0.0;         // divisor n - 1
  double ar_coefficient = 0.0;  // least squares on demeaned data, no intercept
};

AR1Fit ar1_fit(std::span<const double> residuals);

struct SeasonalityShare {
  double frequency = 0.0;
  double share = 0.0;  // fraction of non-zero-frequency periodogram power within +-1 bin
  bool flagged = false;
};

/// Periodogram screen for leftover seasonality. This is a band-power heuristic, not
/// the X-12-ARIMA combined seasonality test.
struct SeasonalityReport {
  std::string method = "periodogram band-power screen (not the X-12-ARIMA combined test)";
  double threshold = 0.01;
  std::vector<SeasonalityShare> shares;

  bool any_flagged() const noexcept;
};

SeasonalityReport residual_seasonality_check(std::span<const double> adjusted, std::span<const double> frequencies,
                                             double threshold = 0.01);

/// {1/s, 2/s, ..., floor(s/2)/s}.
std::vector<double> seasonal_frequencies(std::size_t period);

}  // namespace cissa
