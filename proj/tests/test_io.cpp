#include "cissa/error.hpp"
#include "cissa/io.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace cissa;
using namespace cissa::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("cissa_io_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path write(const std::string& name, const std::string& text) const {
    const auto p = path / name;
    std::ofstream(p) << text;
    return p;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoFailure;
}

}  // namespace

TEST_CASE("read a bare column") {
  TempDir dir;
  const auto f = read_series(dir.write("a.csv", "1\n2\n3\n4\n5\n"));
  CHECK(f.series.values == std::vector<double>{1, 2, 3, 4, 5});
  CHECK(f.dates.empty());
}

TEST_CASE("read a dated monthly file") {
  TempDir dir;
  std::string text = "date,ip\n";
  for (int m = 1; m <= 12; ++m) text += "2020-" + std::string(m < 10 ? "0" : "") + std::to_string(m) + "," +
                                        std::to_string(100 + m) + ".5\n";
  const auto p = dir.write("m.csv", text);
  const auto f = read_series(p, "ip", "date");
  CHECK(f.series.values.size() == 12);
  CHECK(f.series.values[0] == 101.5);
  CHECK(f.series.label == "ip");
  CHECK(f.dates.size() == 12);
  CHECK(f.dates[11] == "2020-12");
  // default column skips the date column
  CHECK(read_series(p, "", "date").series.values == f.series.values);
  CHECK(read_series(p, "1").series.values == f.series.values);
}

TEST_CASE("read errors") {
  TempDir dir;
  CHECK(code_of([&] { read_series(dir.path / "missing.csv"); }) == ErrorCode::FileNotFound);
  const auto bad = dir.write("bad.csv", "x\n1\nabc\n3\n4\n5\n");
  try {
    read_series(bad);
    FAIL("expected an error");
  } catch (const CellError& e) {
    CHECK(e.code() == ErrorCode::NonNumericCell);
    CHECK(e.row() == 3);
    CHECK(e.column() == 1);
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  const auto hole = dir.write("hole.csv", "a,b\n1,2\n3,\n5,6\n7,8\n9,10\n");
  CHECK(code_of([&] { read_series(hole, "b"); }) == ErrorCode::NonNumericCell);
  CHECK(code_of([&] { read_series(hole, "zz"); }) == ErrorCode::ColumnMissing);
  CHECK(code_of([&] { read_series(hole, "7"); }) == ErrorCode::ColumnMissing);
  const auto dates = dir.write("d.csv", "date,v\n2020-01,1\n2020-03,2\n2020-02,3\n2020-04,4\n");
  CHECK(code_of([&] { read_series(dates, "v", "date"); }) == ErrorCode::NonMonotoneDates);
  const auto nan = dir.write("nan.csv", "1\n2\nnan\n4\n5\n");
  CHECK(code_of([&] { read_series(nan); }) == ErrorCode::NonNumericCell);
  const auto short_file = dir.write("s.csv", "1\n2\n3\n");
  CHECK(code_of([&] { read_series(short_file); }) == ErrorCode::InvalidParams);
}

TEST_CASE("write a decomposition") {
  TempDir dir;
  const auto x = ar1_series(120, 0.7, 5);
  const auto d = cissa::cissa(x, 24, parse_bands("trend=0:0.05"));
  const auto out = dir.path / "nested" / "run";
  WriteOptions opts;
  opts.w_correlation = true;
  opts.seasonality = residual_seasonality_check(d.residual().values, seasonal_frequencies(12));
  const auto files = write_decomposition(d, out, opts);
  CHECK(fs::is_directory(out));
  for (const char* name : {"component_trend.csv", "component_irregular.csv", "components.csv", "shares.csv",
                           "spectrum.csv", "wcorrelation.csv", "seasonality.csv"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }
  CHECK(files.size() == 7);

  const auto rows = read_csv(out / "components.csv");
  REQUIRE(rows.size() == x.size() + 1);
  CHECK(rows[0] == std::vector<std::string>{"t", "original", "trend", "irregular"});
  for (std::size_t t = 1; t < rows.size(); ++t) {
    const double original = std::stod(rows[t][1]);
    CHECK(original == x[t - 1]);
    CHECK(std::abs(original - std::stod(rows[t][2]) - std::stod(rows[t][3])) <= 1e-9 * std::max(1.0, std::abs(original)));
  }

  const auto shares = read_csv(out / "shares.csv");
  CHECK(shares[0] == std::vector<std::string>{"component", "contribution_pct"});
  double total = 0.0;
  for (std::size_t i = 1; i < shares.size(); ++i) total += std::stod(shares[i][1]);
  CHECK(std::abs(total - 100.0) <= 0.1);

  const auto spectrum = read_csv(out / "spectrum.csv");
  CHECK(spectrum[0] == std::vector<std::string>{"k", "frequency", "eigenvalue"});
  CHECK(spectrum.size() == 24 / 2 + 2);

  const auto wc = read_csv(out / "wcorrelation.csv");
  CHECK(wc.size() == 3);
  CHECK(std::stod(wc[1][1]) == doctest::Approx(1.0));

  CHECK(slurp(out / "seasonality.csv").find("not the X-12-ARIMA") != std::string::npos);

  SUBCASE("no spectrum for eigenbasis variants") {
    const auto b = basic_ssa(x, 24, parse_bands("trend=0:0.05"));
    const auto other = dir.path / "basic";
    write_decomposition(b, other);
    CHECK(!fs::exists(other / "spectrum.csv"));
    CHECK(!fs::exists(other / "wcorrelation.csv"));
  }
}

TEST_CASE("component files round trip") {
  TempDir dir;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  std::vector<double> x(80);
  for (auto& v : x) v = u(rng) * std::pow(10.0, double(rng() % 20) - 10.0);
  const auto d = cissa::cissa(x, 12, default_monthly_grouping(12));
  write_decomposition(d, dir.path);
  for (const auto& c : d.components) {
    const auto back = read_series(dir.path / ("component_" + c.name + ".csv"), c.name);
    CHECK(back.series.values == c.values);
  }
  const auto original = read_series(dir.path / "components.csv", "original");
  CHECK(original.series.values == x);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("quantile table layout") {
  TempDir dir;
  VariantTable t;
  t.rows.push_back({"trend", "a", {1, 2, 3, 4, 5}});
  write_quantile_table(t, dir.path / "q.csv");
  CHECK(slurp(dir.path / "q.csv") == "component,statistic,q5,q25,q50,q75,q95\ntrend,a,1,2,3,4,5\n");
}

TEST_CASE("run configuration") {
  TempDir dir;
  const auto p = dir.write("run.cfg",
                           "# monthly run\ninput = data.csv\nwindow = 96\nvariant = toeplitz\n"
                           "bands = trend=0:1/96; cycle=1/96:1/18\ndemean = off\nseed = 7\nreps = 10\nout = results\n");
  RunConfig cfg;
  cfg.apply(read_key_values(p));
  CHECK(cfg.input == "data.csv");
  CHECK(cfg.window_length == 96);
  CHECK(cfg.variant == Variant::Toeplitz);
  CHECK(!cfg.demean);
  CHECK(cfg.seed == 7);
  CHECK(cfg.replications == 10);
  CHECK(cfg.output_dir == "results");
  const auto g = cfg.grouping();
  CHECK(g.bands.size() == 2);
  CHECK(g.bands[1].name == "cycle");

  RunConfig defaults;
  defaults.window_length = 48;
  CHECK(defaults.grouping().bands.size() == 3);
  defaults.bands = dir.write("bands.txt", "low=0:0.1\nhigh=0.4:0.5\n").string();
  CHECK(defaults.grouping().bands.size() == 2);

  RunConfig bad;
  CHECK(code_of([&] { bad.apply({{"colour", "red"}}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { bad.apply({{"window", "-3"}}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { bad.apply({{"demean", "maybe"}}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { read_key_values(dir.write("x.cfg", "novalue\n")); }) == ErrorCode::InvalidConfig);
}
