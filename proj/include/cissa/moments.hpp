#pragma once

#include "cissa/embed.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace cissa {

enum class Variant { Basic, Toeplitz, Circulant };

std::string_view variant_name(Variant v) noexcept;
/// Accepts "basic", "toeplitz", "cissa"/"circulant"; throws InvalidConfig otherwise.
Variant parse_variant(std::string_view name);

/// Raw (non-demeaned) lagged second moments with divisor T - m.
struct AutocovarianceSequence {
  std::vector<double> values;  // values[m] for m = 0..max_lag
  std::size_t sample_size = 0;

  std::size_t max_lag() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

struct SecondMomentMatrix {
  Eigen::MatrixXd entries;
  Variant variant = Variant::Basic;

  std::size_t window_length() const noexcept { return static_cast<std::size_t>(entries.rows()); }
};

/// gamma_m = (1 / (T - m)) * sum_{t=0}^{T-m-1} x_t x_{t+m}, m = 0..max_lag.
AutocovarianceSequence autocovariances(std::span<const double> series, std::size_t max_lag);

/// S_B = X X' / N.
SecondMomentMatrix basic_matrix(const TrajectoryMatrix& trajectory);

/// entries(i, j) = gamma_{|i-j|}.
SecondMomentMatrix toeplitz_matrix(std::span<const double> series, std::size_t window_length);

/// First row of the sample circulant matrix:
///   c_m = ((L - m) / L) gamma_m + (m / L) gamma_{L-m},  m = 0..L-1.
/// c_0 = gamma_0 exactly; gamma_L is never touched.
std::vector<double> circulant_first_row(const AutocovarianceSequence& gamma, std::size_t window_length);

/// Circulant matrix whose rows are successive right cyclic shifts of the first row.
SecondMomentMatrix circulant_matrix(std::span<const double> series, std::size_t window_length);

}  // namespace cissa
