#include "cissa/io.hpp"
#include "cissa/ssa.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

using namespace cissa;
using namespace cissa::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

struct Sandbox {
  fs::path dir;
  Sandbox() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("cissa_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(dir);
  }
  ~Sandbox() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  Run run(const std::string& args, const std::string& env = {}) const {
    const auto err_file = dir / "stderr.txt";
    const std::string cmd = "cd '" + dir.string() + "' && " + env + " '" + CISSA_CLI_PATH + "' " + args + " 2>'" +
                            err_file.string() + "'";
    Run r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err_file);
    return r;
  }

  fs::path write_series(const std::string& name, const std::vector<double>& x) const {
    const auto p = dir / name;
    std::ofstream out(p);
    out << "value\n";
    for (double v : x) out << format_double(v) << '\n';
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

const std::string kMonthly = std::string(CISSA_DATA_DIR) + "/monthly_synthetic.csv";

std::vector<double> column(const fs::path& file, const std::string& name) { return read_series(file, name).series.values; }

}  // namespace

TEST_CASE("decompose the bundled monthly data") {
  Sandbox box;
  const std::string before = Sandbox::slurp(kMonthly);
  const auto r = box.run("decompose --input '" + kMonthly + "' --date-column date --window 24 --out res");
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  CHECK(Sandbox::slurp(kMonthly) == before);

  const auto out = box.dir / "res";
  const auto original = column(out / "components.csv", "original");
  const auto x = read_series(kMonthly, "index").series.values;
  CHECK(original == x);
  std::vector<double> total(x.size(), 0.0);
  for (const char* name : {"trend", "cycle", "seasonal", "irregular"}) {
    const auto c = column(out / ("component_" + std::string(name) + ".csv"), name);
    for (std::size_t t = 0; t < x.size(); ++t) total[t] += c[t];
  }
  CHECK(relative_error(total, x) < 1e-9);

  const auto shares = read_series(out / "shares.csv", "contribution_pct").series.values;
  double sum = 0.0;
  for (double s : shares) sum += s;
  CHECK(std::abs(sum - 100.0) <= 0.1);

  // summary rows in Trend, Cycle, Seasonal, Irregular order
  const auto p_trend = r.out.find("Trend");
  const auto p_cycle = r.out.find("Cycle");
  const auto p_seasonal = r.out.find("Seasonal");
  const auto p_irregular = r.out.find("Irregular");
  REQUIRE(p_irregular != std::string::npos);
  CHECK(p_trend < p_cycle);
  CHECK(p_cycle < p_seasonal);
  CHECK(p_seasonal < p_irregular);
  for (const char* f : {"spectrum.csv", "wcorrelation.csv", "seasonality.csv"}) CHECK(fs::exists(out / f));
}

TEST_CASE("default bands at L = 192 put bins 3 to 11 in the cycle") {
  Sandbox box;
  auto x = ar1_series(420, 0.9, 12);
  for (double& v : x) v += 50.0;
  box.write_series("long.csv", x);
  const auto r = box.run("decompose --input long.csv --window 192 --out res");
  REQUIRE(r.code == 0);
  std::vector<double> centered = x;
  double mu = 0.0;
  for (double v : x) mu += v;
  mu /= double(x.size());
  for (double& v : centered) v -= mu;
  const auto d = cissa::cissa(centered, 192, default_monthly_grouping(192));
  const auto& cyc = *d.find("cycle");
  std::vector<std::size_t> low;
  for (auto i : cyc.indices)
    if (i <= 97) low.push_back(i);
  CHECK(low == std::vector<std::size_t>{3, 4, 5, 6, 7, 8, 9, 10, 11});
  const auto cli_cycle = column(box.dir / "res" / "component_cycle.csv", "cycle");
  CHECK(max_abs_diff(cli_cycle, cyc.values) < 1e-12);
  // the mean rides on the trend
  const auto cli_trend = column(box.dir / "res" / "component_trend.csv", "trend");
  for (std::size_t t = 0; t < x.size(); ++t) CHECK(std::abs(cli_trend[t] - d.find("trend")->values[t] - mu) < 1e-9);
}

TEST_CASE("errors exit without outputs") {
  Sandbox box;
  auto r = box.run("decompose --input '" + kMonthly + "' --window 120 --out res");
  CHECK(r.code == 3);
  CHECK(r.err.rfind("error: WindowOutOfRange:", 0) == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  CHECK(!fs::exists(box.dir / "res"));
  CHECK(std::distance(fs::directory_iterator(box.dir), fs::directory_iterator{}) == 1);  // stderr.txt only

  r = box.run("spectrum --input missing.csv --window 12 --out res");
  CHECK(r.code == 3);
  CHECK(r.err.rfind("error: FileNotFound:", 0) == 0);

  r = box.run("simulate --reps 0 --out res");
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: InvalidParams:", 0) == 0);

  r = box.run("decompose --window 12");
  CHECK(r.code == 2);
  r = box.run("frobnicate");
  CHECK(r.code == 2);
  r = box.run("decompose --input '" + kMonthly + "' --window 24 --variant spline --out res");
  CHECK(r.code == 2);
  CHECK(!fs::exists(box.dir / "res"));
}

TEST_CASE("simulate is deterministic") {
  Sandbox box;
  const auto a = box.run("simulate --model linear --reps 10 --seed 5 --variant all --threads 1 --out a");
  const auto b = box.run("simulate --model linear --reps 10 --seed 5 --variant all --threads 3 --out b");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  for (const char* v : {"basic", "toeplitz", "cissa"}) {
    const std::string f = std::string("quantiles_linear_") + v + ".csv";
    const auto text = Sandbox::slurp(box.dir / "a" / f);
    CHECK(!text.empty());
    CHECK(text == Sandbox::slurp(box.dir / "b" / f));
    CHECK(text.rfind("component,statistic,q5,q25,q50,q75,q95\n", 0) == 0);
  }
  const auto c = box.run("simulate --model nonlinear --reps 4", "CISSA_OUT_DIR=envdir");
  CHECK(c.code == 0);
  CHECK(fs::exists(box.dir / "envdir" / "quantiles_nonlinear_cissa.csv"));
}

TEST_CASE("spectrum readout") {
  Sandbox box;
  SUBCASE("white noise is roughly flat") {
    box.write_series("noise.csv", gaussian_noise(10000, 77));
    const auto r = box.run("spectrum --input noise.csv --window 48 --out s");
    REQUIRE(r.code == 0);
    const auto lambda = read_series(box.dir / "s" / "spectrum.csv", "eigenvalue").series.values;
    CHECK(lambda.size() == 25);
    const auto [lo, hi] = std::minmax_element(lambda.begin(), lambda.end());
    CHECK(*hi / *lo < 10.0);
  }
  SUBCASE("a monthly cosine peaks at 1/12") {
    box.write_series("cos.csv", cosine(240, 1.0 / 12.0));
    const auto r = box.run("spectrum --input cos.csv --window 48 --out s");
    REQUIRE(r.code == 0);
    const auto f = read_series(box.dir / "s" / "spectrum.csv", "frequency").series.values;
    const auto lambda = read_series(box.dir / "s" / "spectrum.csv", "eigenvalue").series.values;
    const auto peak = std::max_element(lambda.begin(), lambda.end()) - lambda.begin();
    CHECK(f[std::size_t(peak)] == doctest::Approx(1.0 / 12.0));
  }
}

TEST_CASE("config file with flag override") {
  Sandbox box;
  {
    std::ofstream cfg(box.dir / "run.cfg");
    cfg << "input = " << kMonthly << "\ncolumn = index\nwindow = 36\nvariant = basic\nout = from_config\n";
  }
  auto r = box.run("decompose --config run.cfg");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("variant basic, L = 36") != std::string::npos);
  CHECK(fs::exists(box.dir / "from_config" / "components.csv"));
  r = box.run("decompose --config run.cfg --window 48 --variant cissa --out flags");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("variant cissa, L = 48") != std::string::npos);
  CHECK(fs::exists(box.dir / "flags" / "spectrum.csv"));
  {
    std::ofstream cfg(box.dir / "bad.cfg");
    cfg << "window = 36\ncolour = blue\n";
  }
  r = box.run("decompose --config bad.cfg --input '" + kMonthly + "'");
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: InvalidConfig:", 0) == 0);
}
