#include "cissa/moments.hpp"

#include "cissa/error.hpp"

#include <string>

namespace cissa {

std::string_view variant_name(Variant v) noexcept {
  switch (v) {
    case Variant::Basic: return "basic";
    case Variant::Toeplitz: return "toeplitz";
    case Variant::Circulant: return "cissa";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "basic") return Variant::Basic;
  if (name == "toeplitz") return Variant::Toeplitz;
  if (name == "cissa" || name == "circulant") return Variant::Circulant;
  throw Error(ErrorCode::InvalidConfig, "unknown variant '" + std::string(name) + "'");
}

AutocovarianceSequence autocovariances(std::span<const double> series, std::size_t max_lag) {
  const std::size_t T = series.size();
  if (max_lag >= T) {
    throw Error(ErrorCode::LagOutOfRange,
                "max lag " + std::to_string(max_lag) + " must be below series length " + std::to_string(T));
  }
  require_finite(series);
  AutocovarianceSequence out;
  out.sample_size = T;
  out.values.resize(max_lag + 1);
  for (std::size_t m = 0; m <= max_lag; ++m) {
    double acc = 0.0;
    for (std::size_t t = 0; t + m < T; ++t) acc += series[t] * series[t + m];
    out.values[m] = acc / static_cast<double>(T - m);
  }
  return out;
}

SecondMomentMatrix basic_matrix(const TrajectoryMatrix& trajectory) {
  const auto n = static_cast<double>(trajectory.num_columns());
  SecondMomentMatrix out;
  out.variant = Variant::Basic;
  out.entries = trajectory.entries * trajectory.entries.transpose() / n;
  // Force exact symmetry; the product is symmetric only up to rounding.
  out.entries = 0.5 * (out.entries + out.entries.transpose()).eval();
  return out;
}

SecondMomentMatrix toeplitz_matrix(std::span<const double> series, std::size_t window_length) {
  require_window(series.size(), window_length);
  const auto gamma = autocovariances(series, window_length - 1);
  const auto L = static_cast<Eigen::Index>(window_length);
  SecondMomentMatrix out;
  out.variant = Variant::Toeplitz;
  out.entries.resize(L, L);
  for (Eigen::Index i = 0; i < L; ++i) {
    for (Eigen::Index j = 0; j < L; ++j) {
      out.entries(i, j) = gamma.values[static_cast<std::size_t>(i > j ? i - j : j - i)];
    }
  }
  return out;
}

std::vector<double> circulant_first_row(const AutocovarianceSequence& gamma, std::size_t window_length) {
  if (gamma.values.size() < window_length) {
    throw Error(ErrorCode::LagOutOfRange, "circulant row needs autocovariances up to lag L-1");
  }
  const auto L = static_cast<double>(window_length);
  std::vector<double> row(window_length);
  row[0] = gamma.values[0];
  for (std::size_t m = 1; m < window_length; ++m) {
    const auto md = static_cast<double>(m);
    row[m] = (L - md) / L * gamma.values[m] + md / L * gamma.values[window_length - m];
  }
  return row;
}

SecondMomentMatrix circulant_matrix(std::span<const double> series, std::size_t window_length) {
  require_window(series.size(), window_length);
  const auto row = circulant_first_row(autocovariances(series, window_length - 1), window_length);
  const auto L = static_cast<Eigen::Index>(window_length);
  SecondMomentMatrix out;
  out.variant = Variant::Circulant;
  out.entries.resize(L, L);
  for (Eigen::Index i = 0; i < L; ++i) {
    for (Eigen::Index j = 0; j < L; ++j) {
      out.entries(i, j) = row[static_cast<std::size_t>((j - i + L) % L)];
    }
  }
  return out;
}

}  // namespace cissa
