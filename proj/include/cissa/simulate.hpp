#pragma once

#include "cissa/ssa.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace cissa {

/// Basic structural model x = trend + cycle + seasonal + irregular:
///   trend:    integrated random walk, T_t = T_{t-1} + beta_{t-1}, beta_t = beta_{t-1} + eta_t
///   cycle:    first coordinate of a damped rotation VAR(1) with period `cycle_period`
///   seasonal: sum_j a_{j,t} cos(2 pi j t / s) + b_{j,t} sin(2 pi j t / s), random-walk a, b
///   irregular: Gaussian white noise
/// Defaults reproduce the monthly configuration (T = 193, s = 12, cycle of 48 months).
struct LinearModelParams {
  std::size_t length = 193;
  std::size_t seasonal_period = 12;
  double cycle_period = 48.0;
  double rho_c = 1.0;
  double sigma_trend = 0.0006;     // eta
  double sigma_seasonal = 0.004;   // each a_j, b_j innovation
  double sigma_cycle = 0.008;      // epsilon, epsilon-tilde
  double sigma_irregular = 0.06;   // e
  std::uint64_t seed = 1;

  void validate() const;
};

/// Seasonal term multiplied by exp(a0 + a1 * trend_t).
struct NonlinearModelParams {
  LinearModelParams base;
  double a0 = 0.0;
  double a1 = 10.0;

  void validate() const;
};

struct Realization {
  std::vector<double> observed;
  std::vector<double> trend;
  std::vector<double> cycle;
  std::vector<double> seasonal;  // modulated seasonal for the nonlinear model
  std::vector<double> irregular;
  double a0 = 0.0;  // realized modulation coefficients (nonlinear model only)
  double a1 = 0.0;

  const std::vector<double>& component(std::string_view name) const;
};

/// SplitMix64 step; used to derive independent per-replication seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;
std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t replication) noexcept;

Realization simulate_linear(const LinearModelParams& params);

/// a0, a1 are rescaled per realization so that 0.5 <= exp(a0 + a1 T_t) <= 1.5 for all t.
Realization simulate_nonlinear(const NonlinearModelParams& params);

enum class Model { Linear, Nonlinear };

std::string_view model_name(Model m) noexcept;
Model parse_model(std::string_view name);

inline constexpr std::array<double, 5> kQuantileLevels{0.05, 0.25, 0.50, 0.75, 0.95};

/// Linear-interpolation sample quantile (type 7).
double quantile(std::vector<double> sample, double level);

struct QuantileRow {
  std::string component;  // trend / cycle / seasonal / residual
  std::string statistic;  // a / b / mean / stddev / ar1
  std::array<double, 5> values{};
};

struct VariantTable {
  Variant variant = Variant::Circulant;
  std::size_t replications = 0;
  std::size_t failures = 0;
  std::vector<std::string> failure_messages;
  std::vector<QuantileRow> rows;

  const QuantileRow& row(std::string_view component, std::string_view statistic) const;
};

using Decomposer = std::function<Decomposition(Variant, const Realization&)>;

struct MonteCarloConfig {
  Model model = Model::Linear;
  NonlinearModelParams params;  // `base` is used alone for the linear model
  std::size_t replications = 500;
  std::vector<Variant> variants{Variant::Circulant};
  std::size_t window_length = 48;
  GroupingSpec grouping = structural_model_grouping(48.0, 12);
  std::uint64_t master_seed = 20190901;
  std::size_t threads = 0;  // 0 = hardware concurrency
  Decomposer decomposer;    // empty = run the SSA variant itself
};

/// Simulate, decompose with each variant, regress true on extracted trend/cycle/seasonal and
/// fit an AR(1) to x - trend - cycle - seasonal. Output is independent of thread count.
std::vector<VariantTable> monte_carlo(const MonteCarloConfig& config);

}  // namespace cissa
