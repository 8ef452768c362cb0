#include "cissa/diagnostics.hpp"

#include "cissa/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cissa {

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "series lengths differ (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

}  // namespace

std::vector<double> w_weights(std::size_t series_length, std::size_t window_length) {
  require_window(series_length, window_length);
  const std::size_t N = series_length - window_length + 1;
  std::vector<double> w(series_length);
  for (std::size_t t = 0; t < series_length; ++t) {
    w[t] = static_cast<double>(std::min({t + 1, window_length, N, series_length - t}));
  }
  return w;
}

double w_inner_product(std::span<const double> x1, std::span<const double> x2, std::span<const double> weights) {
  require_same_length(x1, x2);
  require_same_length(x1, weights);
  double acc = 0.0;
  for (std::size_t t = 0; t < x1.size(); ++t) acc += weights[t] * x1[t] * x2[t];
  return acc;
}

double w_correlation(std::span<const double> x1, std::span<const double> x2, std::size_t window_length) {
  require_same_length(x1, x2);
  const auto w = w_weights(x1.size(), window_length);
  const double n1 = w_inner_product(x1, x1, w);
  const double n2 = w_inner_product(x2, x2, w);
  if (n1 <= 0.0 || n2 <= 0.0) throw Error(ErrorCode::ZeroNorm, "w-correlation of a w-null series");
  const double rho = w_inner_product(x1, x2, w) / std::sqrt(n1 * n2);
  return std::clamp(rho, -1.0, 1.0);
}

WCorrelationMatrix w_correlation_matrix(const std::vector<std::vector<double>>& series,
                                        const std::vector<std::string>& labels, std::size_t window_length) {
  if (series.empty()) throw Error(ErrorCode::InvalidParams, "w-correlation matrix needs at least one series");
  if (labels.size() != series.size()) throw Error(ErrorCode::LengthMismatch, "one label per series required");
  for (const auto& s : series) require_same_length(series.front(), s);

  WCorrelationMatrix out;
  out.labels = labels;
  out.weights = w_weights(series.front().size(), window_length);
  const auto G = static_cast<Eigen::Index>(series.size());
  std::vector<double> norms(series.size());
  for (std::size_t g = 0; g < series.size(); ++g) {
    norms[g] = std::sqrt(w_inner_product(series[g], series[g], out.weights));
  }
  out.entries.resize(G, G);
  for (Eigen::Index a = 0; a < G; ++a) {
    for (Eigen::Index b = a; b < G; ++b) {
      const auto ia = static_cast<std::size_t>(a);
      const auto ib = static_cast<std::size_t>(b);
      double rho = std::numeric_limits<double>::quiet_NaN();
      if (norms[ia] > 0.0 && norms[ib] > 0.0) {
        rho = a == b ? 1.0
                     : std::clamp(w_inner_product(series[ia], series[ib], out.weights) / (norms[ia] * norms[ib]),
                                  -1.0, 1.0);
      }
      out.entries(a, b) = rho;
      out.entries(b, a) = rho;
    }
  }
  out.absolute = out.entries.cwiseAbs();
  return out;
}

WCorrelationMatrix w_correlation_matrix(const Decomposition& d) {
  std::vector<std::vector<double>> series;
  std::vector<std::string> labels;
  for (const auto& c : d.components) {
    series.push_back(c.values);
    labels.push_back(c.name);
  }
  return w_correlation_matrix(series, labels, d.window_length);
}

RegressionCheck regression_check(std::span<const double> true_component, std::span<const double> extracted,
                                 std::string label) {
  require_same_length(true_component, extracted);
  if (extracted.size() < 3) throw Error(ErrorCode::InvalidParams, "regression needs at least three observations");
  const double my = mean_of(true_component);
  const double mx = mean_of(extracted);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t t = 0; t < extracted.size(); ++t) {
    const double dx = extracted[t] - mx;
    sxx += dx * dx;
    sxy += dx * (true_component[t] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::DegenerateRegressor, "extracted component has zero variance");
  RegressionCheck out;
  out.label = std::move(label);
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  return out;
}

AR1Fit ar1_fit(std::span<const double> residuals) {
  const std::size_t n = residuals.size();
  if (n < 3) throw Error(ErrorCode::InvalidParams, "AR(1) fit needs at least three observations");
  AR1Fit out;
  out.mean = mean_of(residuals);
  double ss = 0.0;
  for (double r : residuals) ss += (r - out.mean) * (r - out.mean);
  out.stddev = std::sqrt(ss / static_cast<double>(n - 1));

  double num = 0.0;
  double den = 0.0;
  for (std::size_t t = 1; t < n; ++t) {
    const double prev = residuals[t - 1] - out.mean;
    num += prev * (residuals[t] - out.mean);
    den += prev * prev;
  }
  out.ar_coefficient = den > 0.0 ? num / den : 0.0;
  return out;
}

bool SeasonalityReport::any_flagged() const noexcept {
  return std::any_of(shares.begin(), shares.end(), [](const SeasonalityShare& s) { return s.flagged; });
}

SeasonalityReport residual_seasonality_check(std::span<const double> adjusted, std::span<const double> frequencies,
                                             double threshold) {
  if (adjusted.size() < 2) throw Error(ErrorCode::InvalidParams, "seasonality screen needs at least two samples");
  const double mu = mean_of(adjusted);
  std::vector<double> centered(adjusted.begin(), adjusted.end());
  for (double& v : centered) v -= mu;
  const auto p = periodogram(centered);
  const std::size_t n = adjusted.size();
  const std::size_t top = p.powers.size() - 1;
  const double total = std::accumulate(p.powers.begin() + 1, p.powers.end(), 0.0);

  SeasonalityReport report;
  report.threshold = threshold;
  for (double f : frequencies) {
    SeasonalityShare s;
    s.frequency = f;
    const auto centre = static_cast<std::size_t>(std::llround(f * static_cast<double>(n)));
    const std::size_t lo = std::max<std::size_t>(1, centre == 0 ? 1 : centre - 1);
    const std::size_t hi = std::min(top, centre + 1);
    double band = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) band += p.powers[j];
    s.share = total > 0.0 ? band / total : 0.0;
    s.flagged = s.share > threshold;
    report.shares.push_back(s);
  }
  return report;
}

std::vector<double> seasonal_frequencies(std::size_t period) {
  std::vector<double> out;
  for (std::size_t j = 1; j <= period / 2; ++j) out.push_back(static_cast<double>(j) / static_cast<double>(period));
  return out;
}

}  // namespace cissa
