#pragma once

#include "cissa/moments.hpp"
#include "cissa/spectral.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cissa {

/// B_k: the eigentriple indices sharing frequency (k-1)/L.
struct FrequencyGroup {
  enum class Kind { Zero, Paired, Nyquist };

  std::size_t bin = 0;               // k, 1-based
  std::vector<std::size_t> indices;  // {1}, {k, L+2-k} or {L/2+1}
  double center_frequency = 0.0;
  Kind kind = Kind::Paired;
};

/// B_1 .. B_M with M = floor(L/2) + 1; partitions {1..L}.
std::vector<FrequencyGroup> frequency_groups(std::size_t window_length);

/// Closed interval of frequencies in cycles per unit time.
struct FrequencyInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double frequency) const noexcept;
};

struct Band {
  std::string name;
  std::vector<FrequencyInterval> intervals;

  bool contains(double frequency) const noexcept;
};

struct GroupingSpec {
  std::vector<Band> bands;
  std::string residual_name = "irregular";

  /// Throws EmptyGrouping / InvalidGrouping.
  void validate() const;

  /// Index of the band owning `frequency` (lowest band wins on a shared endpoint),
  /// or nullopt for residual content.
  std::optional<std::size_t> band_for(double frequency) const;
};

/// Parses "name=lo:hi;name=f;...". A repeated name adds another interval to that band.
GroupingSpec parse_bands(std::string_view text, std::string residual_name = "irregular");

/// Trend / cycle / seasonal bands for monthly data.
///   trend    = bins with frequency below 1/cycle_max (periods longer than the cycle range)
///   cycle    = [1/cycle_max, 1/cycle_min]
///   seasonal = {1/12, 1/6, 1/4, 1/3, 5/12, 1/2}
/// Throws NotMonthlyCompatible unless L is a positive multiple of 12.
GroupingSpec default_monthly_grouping(std::size_t window_length, double cycle_min_months = 18.0,
                                      double cycle_max_months = 96.0);

/// Bands for the structural-model experiments: trend {0}, cycle {1/cycle_period},
/// seasonal {j/s, j = 1..floor(s/2)}.
GroupingSpec structural_model_grouping(double cycle_period, std::size_t seasonal_period);

struct Component {
  std::string name;
  std::vector<double> values;
  double share = 0.0;                // percent of total (clamped) eigenvalue mass
  std::vector<std::size_t> indices;  // eigentriple indices reconstructed into this component
};

struct SpectrumPoint {
  double frequency = 0.0;
  double eigenvalue = 0.0;
};

struct Decomposition {
  Variant variant = Variant::Circulant;
  std::size_t window_length = 0;
  std::vector<double> original;
  std::vector<Component> components;  // bands in grouping order, residual last
  std::vector<SpectrumPoint> eigenvalue_spectrum;  // Circulant only, k = 1..L

  const Component* find(std::string_view name) const noexcept;
  const Component& residual() const { return components.back(); }
};

/// Reconstructed series of one CiSSA frequency bin.
struct ElementarySeries {
  std::size_t bin = 0;
  double frequency = 0.0;
  std::vector<double> values;
  /// Separate reconstructions from sqrt(2) Re(u_k) and sqrt(2) Im(u_k); one entry for
  /// the real singleton bins. Their sum is `values`.
  std::vector<std::vector<double>> parts;
  double eigenvalue_sum = 0.0;  // lambda_k + lambda_{L+2-k}, or lambda_k for singletons
};

/// Per-frequency elementary reconstructed series, bins k = 1..floor(L/2)+1.
std::vector<ElementarySeries> cissa_elementary(std::span<const double> series, std::size_t window_length);

Decomposition cissa(std::span<const double> series, std::size_t window_length, const GroupingSpec& grouping);

enum class FrequencyAssigner {
  Eigenvector,         // periodogram of u_k (length L)
  PrincipalComponent,  // periodogram of u_k' X (length N)
};

Decomposition basic_ssa(std::span<const double> series, std::size_t window_length, const GroupingSpec& grouping,
                        FrequencyAssigner assigner = FrequencyAssigner::Eigenvector);

Decomposition toeplitz_ssa(std::span<const double> series, std::size_t window_length, const GroupingSpec& grouping,
                           FrequencyAssigner assigner = FrequencyAssigner::Eigenvector);

Decomposition decompose(Variant variant, std::span<const double> series, std::size_t window_length,
                        const GroupingSpec& grouping, FrequencyAssigner assigner = FrequencyAssigner::Eigenvector);

}  // namespace cissa
