#include "cissa/simulate.hpp"

#include "cissa/diagnostics.hpp"
#include "cissa/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <thread>

namespace cissa {

void LinearModelParams::validate() const {
  const bool sigmas_ok = sigma_trend >= 0.0 && sigma_seasonal >= 0.0 && sigma_cycle >= 0.0 && sigma_irregular >= 0.0;
  if (!sigmas_ok) throw Error(ErrorCode::InvalidParams, "innovation standard deviations must be non-negative");
  if (seasonal_period < 2) throw Error(ErrorCode::InvalidParams, "seasonal period must be at least 2");
  if (!(cycle_period > 2.0)) throw Error(ErrorCode::InvalidParams, "cycle period must exceed 2");
  if (!(rho_c > 0.0 && rho_c <= 1.0)) throw Error(ErrorCode::InvalidParams, "cycle damping must lie in (0, 1]");
  if (length < 4) throw Error(ErrorCode::InvalidParams, "series length must be at least 4");
}

void NonlinearModelParams::validate() const {
  base.validate();
  if (!(a1 > 0.0)) throw Error(ErrorCode::InvalidParams, "modulation slope a1 must be positive");
  if (!std::isfinite(a0)) throw Error(ErrorCode::InvalidParams, "modulation offset a0 must be finite");
}

const std::vector<double>& Realization::component(std::string_view name) const {
  if (name == "trend") return trend;
  if (name == "cycle") return cycle;
  if (name == "seasonal") return seasonal;
  if (name == "irregular") return irregular;
  throw Error(ErrorCode::InvalidParams, "unknown component '" + std::string(name) + "'");
}

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t replication) noexcept {
  std::uint64_t state = master_seed ^ (0xD1B54A32D192ED03ULL * (static_cast<std::uint64_t>(replication) + 1));
  return splitmix64(state);
}

Realization simulate_linear(const LinearModelParams& params) {
  params.validate();
  const std::size_t T = params.length;
  const std::size_t harmonics = params.seasonal_period / 2;

  // mt19937_64 seeded through SplitMix64; draws per step are taken in a fixed order
  // (eta, eps, eps~, then a_j, b_j for each harmonic, then e) whether or not a sigma is 0,
  // so switching one source off leaves the others' paths unchanged.
  std::uint64_t state = params.seed;
  std::mt19937_64 rng(splitmix64(state));
  std::normal_distribution<double> normal(0.0, 1.0);

  Realization r;
  r.trend.resize(T);
  r.cycle.resize(T);
  r.seasonal.resize(T);
  r.irregular.resize(T);
  r.observed.resize(T);

  const double angle = 2.0 * std::numbers::pi / params.cycle_period;
  const double cos_c = params.rho_c * std::cos(angle);
  const double sin_c = params.rho_c * std::sin(angle);

  double level = 0.0;
  double slope = 0.0;
  double cyc = 0.0;
  double cyc_aux = 0.0;
  std::vector<double> a(harmonics, 0.0);
  std::vector<double> b(harmonics, 0.0);

  for (std::size_t i = 0; i < T; ++i) {
    const double t = static_cast<double>(i + 1);  // time runs 1..T

    const double eta = params.sigma_trend * normal(rng);
    level += slope;
    slope += eta;

    const double eps = params.sigma_cycle * normal(rng);
    const double eps_aux = params.sigma_cycle * normal(rng);
    const double next_cyc = cos_c * cyc + sin_c * cyc_aux + eps;
    const double next_aux = -sin_c * cyc + cos_c * cyc_aux + eps_aux;
    cyc = next_cyc;
    cyc_aux = next_aux;

    double seas = 0.0;
    for (std::size_t j = 0; j < harmonics; ++j) {
      a[j] += params.sigma_seasonal * normal(rng);
      b[j] += params.sigma_seasonal * normal(rng);
      const double w = 2.0 * std::numbers::pi * static_cast<double>(j + 1) / static_cast<double>(params.seasonal_period);
      seas += a[j] * std::cos(w * t) + b[j] * std::sin(w * t);
    }

    const double e = params.sigma_irregular * normal(rng);

    r.trend[i] = level;
    r.cycle[i] = cyc;
    r.seasonal[i] = seas;
    r.irregular[i] = e;
    r.observed[i] = level + cyc + seas + e;
  }
  return r;
}

Realization simulate_nonlinear(const NonlinearModelParams& params) {
  params.validate();
  Realization r = simulate_linear(params.base);

  const auto [tmin_it, tmax_it] = std::minmax_element(r.trend.begin(), r.trend.end());
  const double tmin = *tmin_it;
  const double tmax = *tmax_it;
  const double lo = std::log(0.5);
  const double hi = std::log(1.5);

  double a0 = params.a0;
  double a1 = params.a1;
  double emin = a0 + a1 * tmin;
  double emax = a0 + a1 * tmax;
  if (emin < lo || emax > hi) {
    const double span = emax - emin;
    const double room = (hi - lo) * (1.0 - 1e-12);
    if (span > room) {
      a1 *= room / span;
      a0 = lo - a1 * tmin;
    } else if (emin < lo) {
      a0 += lo - emin;
    } else {
      a0 -= emax - hi;
    }
  }
  r.a0 = a0;
  r.a1 = a1;

  for (std::size_t i = 0; i < r.observed.size(); ++i) {
    r.seasonal[i] *= std::exp(a0 + a1 * r.trend[i]);
    r.observed[i] = r.trend[i] + r.cycle[i] + r.seasonal[i] + r.irregular[i];
  }
  return r;
}

std::string_view model_name(Model m) noexcept { return m == Model::Linear ? "linear" : "nonlinear"; }

Model parse_model(std::string_view name) {
  if (name == "linear") return Model::Linear;
  if (name == "nonlinear") return Model::Nonlinear;
  throw Error(ErrorCode::InvalidConfig, "unknown model '" + std::string(name) + "'");
}

double quantile(std::vector<double> sample, double level) {
  if (sample.empty()) return std::nan("");
  std::sort(sample.begin(), sample.end());
  const double pos = level * static_cast<double>(sample.size() - 1);
  const auto below = static_cast<std::size_t>(std::floor(pos));
  const std::size_t above = std::min(below + 1, sample.size() - 1);
  const double frac = pos - static_cast<double>(below);
  return sample[below] + frac * (sample[above] - sample[below]);
}

const QuantileRow& VariantTable::row(std::string_view component, std::string_view statistic) const {
  for (const auto& r : rows) {
    if (r.component == component && r.statistic == statistic) return r;
  }
  throw Error(ErrorCode::InvalidParams, "no quantile row " + std::string(component) + "/" + std::string(statistic));
}

namespace {

constexpr std::array<const char*, 3> kSignals{"trend", "cycle", "seasonal"};

struct ReplicationStats {
  std::array<double, 3> intercept{};
  std::array<double, 3> slope{};
  AR1Fit residual;
};

ReplicationStats evaluate(const Decomposition& d, const Realization& r) {
  ReplicationStats s;
  std::vector<double> residual = r.observed;
  for (std::size_t c = 0; c < kSignals.size(); ++c) {
    const Component* extracted = d.find(kSignals[c]);
    if (!extracted) throw Error(ErrorCode::InvalidGrouping, std::string("decomposition lacks '") + kSignals[c] + "'");
    const auto fit = regression_check(r.component(kSignals[c]), extracted->values, kSignals[c]);
    s.intercept[c] = fit.intercept;
    s.slope[c] = fit.slope;
    for (std::size_t t = 0; t < residual.size(); ++t) residual[t] -= extracted->values[t];
  }
  s.residual = ar1_fit(residual);
  return s;
}

QuantileRow make_row(std::string component, std::string statistic, const std::vector<double>& sample) {
  QuantileRow row{std::move(component), std::move(statistic), {}};
  for (std::size_t q = 0; q < kQuantileLevels.size(); ++q) row.values[q] = quantile(sample, kQuantileLevels[q]);
  return row;
}

}  // namespace

std::vector<VariantTable> monte_carlo(const MonteCarloConfig& config) {
  if (config.replications < 1) throw Error(ErrorCode::InvalidParams, "at least one replication is required");
  if (config.variants.empty()) throw Error(ErrorCode::InvalidParams, "no SSA variant selected");
  config.grouping.validate();
  if (config.model == Model::Linear) {
    config.params.base.validate();
  } else {
    config.params.validate();
  }
  require_window(config.params.base.length, config.window_length);

  const std::size_t reps = config.replications;
  const std::size_t nv = config.variants.size();
  // outcome[rep * nv + v]: stats on success, message on failure.
  std::vector<std::optional<ReplicationStats>> outcome(reps * nv);
  std::vector<std::string> errors(reps * nv);

  auto run_one = [&](std::size_t rep) {
    NonlinearModelParams p = config.params;
    p.base.seed = replication_seed(config.master_seed, rep);
    Realization r;
    try {
      r = config.model == Model::Linear ? simulate_linear(p.base) : simulate_nonlinear(p);
    } catch (const std::exception& ex) {
      for (std::size_t v = 0; v < nv; ++v) errors[rep * nv + v] = ex.what();
      return;
    }
    for (std::size_t v = 0; v < nv; ++v) {
      try {
        const auto d = config.decomposer ? config.decomposer(config.variants[v], r)
                                         : decompose(config.variants[v], r.observed, config.window_length,
                                                     config.grouping);
        outcome[rep * nv + v] = evaluate(d, r);
      } catch (const std::exception& ex) {
        errors[rep * nv + v] = ex.what();
      }
    }
  };

  std::size_t workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, reps);
  if (workers <= 1) {
    for (std::size_t rep = 0; rep < reps; ++rep) run_one(rep);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t rep = next++; rep < reps; rep = next++) run_one(rep);
      });
    }
  }

  // Aggregation walks replications in index order, independent of completion order.
  std::vector<VariantTable> tables;
  for (std::size_t v = 0; v < nv; ++v) {
    VariantTable table;
    table.variant = config.variants[v];
    table.replications = reps;
    std::array<std::vector<double>, 3> a;
    std::array<std::vector<double>, 3> b;
    std::vector<double> mean;
    std::vector<double> sd;
    std::vector<double> ar;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const auto& o = outcome[rep * nv + v];
      if (!o) {
        ++table.failures;
        table.failure_messages.push_back("replication " + std::to_string(rep) + ": " + errors[rep * nv + v]);
        continue;
      }
      for (std::size_t c = 0; c < 3; ++c) {
        a[c].push_back(o->intercept[c]);
        b[c].push_back(o->slope[c]);
      }
      mean.push_back(o->residual.mean);
      sd.push_back(o->residual.stddev);
      ar.push_back(o->residual.ar_coefficient);
    }
    for (std::size_t c = 0; c < 3; ++c) table.rows.push_back(make_row(kSignals[c], "a", a[c]));
    for (std::size_t c = 0; c < 3; ++c) table.rows.push_back(make_row(kSignals[c], "b", b[c]));
    table.rows.push_back(make_row("residual", "mean", mean));
    table.rows.push_back(make_row("residual", "stddev", sd));
    table.rows.push_back(make_row("residual", "ar1", ar));
    tables.push_back(std::move(table));
  }
  return tables;
}

}  // namespace cissa
