#include "cissa/diagnostics.hpp"
#include "cissa/error.hpp"
#include "cissa/io.hpp"
#include "cissa/moments.hpp"
#include "cissa/simulate.hpp"
#include "cissa/spectral.hpp"
#include "cissa/ssa.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace cissa;

namespace {

constexpr int kUsage = 2;
constexpr int kInput = 3;
constexpr int kNumeric = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound:
    case ErrorCode::ColumnMissing:
    case ErrorCode::NonNumericCell:
    case ErrorCode::NonMonotoneDates:
    case ErrorCode::NonFiniteInput:
    case ErrorCode::WindowOutOfRange:
    case ErrorCode::NotMonthlyCompatible:
    case ErrorCode::LengthMismatch:
    case ErrorCode::IoFailure:
      return kInput;
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::ZeroNorm:
    case ErrorCode::DegenerateRegressor:
    case ErrorCode::EmptyMatrix:
    case ErrorCode::VariantMismatch:
    case ErrorCode::LagOutOfRange:
      return kNumeric;
    case ErrorCode::EmptyGrouping:
    case ErrorCode::InvalidGrouping:
    case ErrorCode::InvalidParams:
    case ErrorCode::InvalidConfig:
      return kUsage;
  }
  return kNumeric;
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("CISSA_OUT_DIR"); env && *env) return env;
  return "cissa_out";
}

// Files go to a hidden sibling directory first and are moved into place only once every
// output has been written, so a failing command leaves nothing behind.
class Staging {
 public:
  explicit Staging(fs::path target) : target_(std::move(target)) {
    const auto parent = target_.has_parent_path() ? target_.parent_path() : fs::path(".");
    dir_ = parent / ("." + target_.filename().string() + ".partial-" + std::to_string(::getpid()));
    std::error_code ec;
    fs::remove_all(dir_, ec);
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + dir_.string() + "': " + ec.message());
  }
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;
  ~Staging() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  const fs::path& dir() const { return dir_; }

  std::vector<fs::path> commit() {
    std::error_code ec;
    fs::create_directories(target_, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + target_.string() + "': " + ec.message());
    std::vector<fs::path> moved;
    for (const auto& entry : fs::directory_iterator(dir_)) {
      const auto dest = target_ / entry.path().filename();
      fs::rename(entry.path(), dest, ec);
      if (ec) throw Error(ErrorCode::IoFailure, "cannot move output to '" + dest.string() + "': " + ec.message());
      moved.push_back(dest);
    }
    return moved;
  }

 private:
  fs::path target_;
  fs::path dir_;
};

struct Options {
  std::string config;
  std::string input;
  std::string column;
  std::string date_column;
  std::string variant = "cissa";
  std::vector<std::string> variants;
  std::size_t window = 0;
  std::string bands;
  bool demean = true;
  std::uint64_t seed = 20190901;
  std::size_t reps = 500;
  bool full = false;
  std::string model = "linear";
  std::size_t threads = 0;
  std::string out;
};

// Config file first, then any flag given on the command line wins.
RunConfig resolve(const Options& o, const CLI::App& cmd) {
  RunConfig cfg;
  if (!o.config.empty()) cfg.apply(read_key_values(o.config));
  auto given = [&](const char* name) {
    const auto* opt = cmd.get_option_no_throw(name);
    return opt && opt->count() > 0;
  };
  if (given("--input")) cfg.input = o.input;
  if (given("--column")) cfg.column = o.column;
  if (given("--date-column")) cfg.date_column = o.date_column;
  if (given("--variant") && o.variants.empty()) cfg.variant = parse_variant(o.variant);
  if (given("--window")) cfg.window_length = o.window;
  if (given("--bands")) cfg.bands = o.bands;
  if (given("--demean") || given("--no-demean")) cfg.demean = o.demean;
  if (given("--seed")) cfg.seed = o.seed;
  if (given("--reps")) cfg.replications = o.reps;
  if (given("--model")) cfg.model = o.model;
  if (given("--out")) cfg.output_dir = o.out;
  if (cfg.output_dir.empty()) cfg.output_dir = default_out_dir().string();
  return cfg;
}

std::string display_name(std::string name) {
  if (!name.empty()) name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  return name;
}

void print_shares(const Decomposition& d) {
  // Trend, Cycle, Seasonal first, other bands next, residual last.
  std::vector<const Component*> order;
  for (const char* known : {"trend", "cycle", "seasonal"}) {
    if (const auto* c = d.find(known); c && c != &d.residual()) order.push_back(c);
  }
  for (const auto& c : d.components) {
    if (&c == &d.residual()) continue;
    if (std::find(order.begin(), order.end(), &c) == order.end()) order.push_back(&c);
  }
  order.push_back(&d.residual());
  std::printf("%-16s %10s\n", "component", "share_pct");
  double total = 0.0;
  for (const auto* c : order) {
    std::printf("%-16s %10.2f\n", display_name(c->name).c_str(), c->share);
    total += c->share;
  }
  std::printf("%-16s %10.2f\n", "Total", total);
}

std::vector<double> load(const RunConfig& cfg, std::vector<std::string>* dates = nullptr) {
  if (cfg.input.empty()) throw Error(ErrorCode::InvalidConfig, "--input is required");
  auto file = read_series(cfg.input, cfg.column, cfg.date_column);
  if (dates) *dates = std::move(file.dates);
  return std::move(file.series.values);
}

double mean_of(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / double(x.size()); }

int run_decompose(const Options& o, const CLI::App& cmd) {
  const auto cfg = resolve(o, cmd);
  std::vector<std::string> dates;
  const auto raw = load(cfg, &dates);
  if (cfg.window_length == 0) throw Error(ErrorCode::InvalidConfig, "--window is required");
  require_window(raw.size(), cfg.window_length);
  const auto grouping = cfg.grouping();

  const double mu = cfg.demean ? mean_of(raw) : 0.0;
  std::vector<double> x = raw;
  for (double& v : x) v -= mu;

  auto d = decompose(cfg.variant, x, cfg.window_length, grouping);
  if (mu != 0.0) {
    // The mean is a zero-frequency level: it goes back where frequency 0 was grouped.
    const auto band = grouping.band_for(0.0);
    Component& target = band ? d.components[*band] : d.components.back();
    for (double& v : target.values) v += mu;
  }
  d.original = raw;

  WriteOptions opts;
  opts.dates = dates;
  opts.w_correlation = true;
  if (const auto* s = d.find("seasonal"); s && s != &d.residual()) {
    std::vector<double> adjusted(raw.size());
    for (std::size_t t = 0; t < raw.size(); ++t) adjusted[t] = raw[t] - s->values[t];
    opts.seasonality = residual_seasonality_check(adjusted, seasonal_frequencies(12));
  }

  Staging staging(cfg.output_dir);
  write_decomposition(d, staging.dir(), opts);
  staging.commit();

  std::printf("variant %s, L = %zu, T = %zu%s\n", std::string(variant_name(d.variant)).c_str(), d.window_length,
              raw.size(), cfg.demean ? ", demeaned" : "");
  print_shares(d);
  if (opts.seasonality) {
    std::printf("residual seasonality (%s): %s\n", opts.seasonality->method.c_str(),
                opts.seasonality->any_flagged() ? "flagged" : "none detected");
  }
  std::printf("outputs in %s\n", cfg.output_dir.c_str());
  return 0;
}

int run_spectrum(const Options& o, const CLI::App& cmd) {
  const auto cfg = resolve(o, cmd);
  const auto raw = load(cfg);
  if (cfg.window_length == 0) throw Error(ErrorCode::InvalidConfig, "--window is required");
  require_window(raw.size(), cfg.window_length);
  std::vector<double> x = raw;
  if (cfg.demean) {
    const double mu = mean_of(raw);
    for (double& v : x) v -= mu;
  }
  const auto matrix = circulant_matrix(x, cfg.window_length);
  const auto triples = circulant_eigentriples(matrix);
  std::vector<SpectrumPoint> spectrum;
  for (const auto& t : triples) spectrum.push_back({t.frequency, t.eigenvalue});

  Staging staging(cfg.output_dir);
  write_spectrum(spectrum, staging.dir() / "spectrum.csv");
  staging.commit();

  std::size_t peak = 0;
  for (std::size_t k = 1; k <= cfg.window_length / 2; ++k)
    if (spectrum[k].eigenvalue > spectrum[peak].eigenvalue) peak = k;
  std::printf("L = %zu, peak at frequency %.6g (bin %zu, eigenvalue %.6g)\n", cfg.window_length,
              spectrum[peak].frequency, peak + 1, spectrum[peak].eigenvalue);
  std::printf("outputs in %s\n", cfg.output_dir.c_str());
  return 0;
}

int run_simulate(const Options& o, const CLI::App& cmd) {
  auto cfg = resolve(o, cmd);
  MonteCarloConfig mc;
  mc.model = parse_model(cfg.model);
  mc.replications = o.full ? 10000 : cfg.replications;
  mc.master_seed = cfg.seed;
  mc.threads = o.threads;
  if (cfg.window_length != 0) mc.window_length = cfg.window_length;
  if (!cfg.bands.empty()) mc.grouping = cfg.grouping();

  mc.variants.clear();
  std::vector<std::string> names = o.variants;
  if (names.empty()) names.emplace_back(variant_name(cfg.variant));
  for (const auto& n : names) {
    if (n == "all") {
      mc.variants = {Variant::Basic, Variant::Toeplitz, Variant::Circulant};
      break;
    }
    mc.variants.push_back(parse_variant(n));
  }

  const auto tables = monte_carlo(mc);
  for (const auto& t : tables) {
    if (t.failures == t.replications) {
      throw Error(ErrorCode::ConvergenceFailure, "every replication failed for " +
                                                     std::string(variant_name(t.variant)) + ": " +
                                                     t.failure_messages.front());
    }
  }

  Staging staging(cfg.output_dir);
  for (const auto& t : tables) {
    write_quantile_table(t, staging.dir() / ("quantiles_" + std::string(model_name(mc.model)) + "_" +
                                             std::string(variant_name(t.variant)) + ".csv"));
  }
  staging.commit();

  std::printf("model %s, %zu replications, L = %zu, seed %llu\n", std::string(model_name(mc.model)).c_str(),
              mc.replications, mc.window_length, static_cast<unsigned long long>(mc.master_seed));
  for (const auto& t : tables) {
    std::printf("\n%s (failures: %zu)\n", std::string(variant_name(t.variant)).c_str(), t.failures);
    std::printf("%-10s %-7s %10s %10s %10s %10s %10s\n", "component", "stat", "q5", "q25", "q50", "q75", "q95");
    for (const auto& r : t.rows) {
      std::printf("%-10s %-7s", r.component.c_str(), r.statistic.c_str());
      for (double v : r.values) std::printf(" %10.4f", v);
      std::printf("\n");
    }
    for (const auto& m : t.failure_messages) std::fprintf(stderr, "warning: %s\n", m.c_str());
  }
  std::printf("outputs in %s\n", cfg.output_dir.c_str());
  return 0;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "key = value configuration file; flags override it");
  cmd->add_option("--out", o.out, "output directory (default $CISSA_OUT_DIR or ./cissa_out)");
  cmd->add_option("--window", o.window, "window length L");
  cmd->add_option("--bands", o.bands, "inline \"name=lo:hi;...\" or a bands file");
}

void add_input(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.input, "CSV file");
  cmd->add_option("--column", o.column, "value column: header name or 0-based index");
  cmd->add_option("--date-column", o.date_column, "date column, checked to be increasing");
  cmd->add_flag("--demean,!--no-demean", o.demean, "subtract the sample mean first (default on)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circulant singular spectrum analysis"};
  app.require_subcommand(1);
  Options o;

  auto* decompose_cmd = app.add_subcommand("decompose", "split a series into named frequency bands");
  add_input(decompose_cmd, o);
  add_common(decompose_cmd, o);
  decompose_cmd->add_option("--variant", o.variant, "cissa, basic or toeplitz");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "circulant eigenvalues at the frequencies (k-1)/L");
  add_input(spectrum_cmd, o);
  add_common(spectrum_cmd, o);

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo on the structural model");
  add_common(simulate_cmd, o);
  simulate_cmd->add_option("--model", o.model, "linear or nonlinear");
  simulate_cmd->add_option("--reps", o.reps, "replications (default 500)");
  simulate_cmd->add_flag("--full", o.full, "10000 replications");
  simulate_cmd->add_option("--seed", o.seed, "master seed");
  simulate_cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  simulate_cmd->add_option("--variant", o.variants, "cissa, basic, toeplitz or all; repeatable")->expected(1, 3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: Usage: %s\n", e.what());
    return kUsage;
  }

  try {
    if (*decompose_cmd) return run_decompose(o, *decompose_cmd);
    if (*spectrum_cmd) return run_spectrum(o, *spectrum_cmd);
    return run_simulate(o, *simulate_cmd);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: IoFailure: %s\n", e.what());
    return kInput;
  }
}
