#include "cissa/diagnostics.hpp"
#include "cissa/error.hpp"
#include "cissa/simulate.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace cissa;
using namespace cissa::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoFailure;
}

}  // namespace

TEST_CASE("w weights") {
  CHECK(w_weights(5, 2) == std::vector<double>{1, 2, 2, 2, 1});
  CHECK(w_weights(7, 3) == std::vector<double>{1, 2, 3, 3, 3, 2, 1});
  for (std::size_t T : {5u, 10u, 101u}) {
    const auto w = w_weights(T, 2);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(2.0 * double(T - 1)));
  }
  for (std::size_t L : {2u, 5u, 12u, 40u}) {
    const std::size_t T = 100;
    const auto w = w_weights(T, L);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(double(L * (T - L + 1))));
  }
  CHECK(code_of([] { w_weights(5, 3); }) == ErrorCode::WindowOutOfRange);
}

TEST_CASE("w correlation basics") {
  const auto x = gaussian_noise(50, 1);
  std::vector<double> neg(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) neg[t] = -x[t];
  CHECK(w_correlation(x, x, 10) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w_correlation(x, neg, 10) == doctest::Approx(-1.0).epsilon(1e-14));
  const std::vector<double> a{1, 0, 0, 0, 0};
  const std::vector<double> b{0, 0, 0, 0, 1};
  CHECK(w_correlation(a, b, 2) == 0.0);
  const std::vector<double> zero(5, 0.0);
  CHECK(code_of([&] { w_correlation(a, zero, 2); }) == ErrorCode::ZeroNorm);
  CHECK(code_of([&] { w_correlation(a, std::vector<double>(6, 1.0), 2); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("w correlation is bounded and scale invariant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> scale(-10.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x1 = gaussian_noise(60, rng());
    const auto x2 = gaussian_noise(60, rng());
    const double r = w_correlation(x1, x2, 12);
    CHECK(std::abs(r) <= 1.0 + 1e-12);
    const double alpha = scale(rng);
    const double beta = scale(rng);
    std::vector<double> y1(60), y2(60);
    for (std::size_t t = 0; t < 60; ++t) {
      y1[t] = alpha * x1[t];
      y2[t] = beta * x2[t];
    }
    const double sign = alpha * beta > 0.0 ? 1.0 : -1.0;
    CHECK(std::abs(w_correlation(y1, y2, 12) - sign * r) < 1e-12);
  }
}

TEST_CASE("w correlation matrix") {
  const auto x = gaussian_noise(40, 2);
  SUBCASE("identical series") {
    const auto m = w_correlation_matrix({x, x}, {"a", "b"}, 8);
    CHECK(m.entries.rows() == 2);
    for (Eigen::Index i = 0; i < 2; ++i)
      for (Eigen::Index j = 0; j < 2; ++j) CHECK(m.entries(i, j) == doctest::Approx(1.0));
  }
  SUBCASE("single series") {
    const auto m = w_correlation_matrix({x}, {"a"}, 8);
    CHECK(m.entries.rows() == 1);
    CHECK(m.entries(0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("null series is undefined, not fatal") {
    const auto m = w_correlation_matrix({x, std::vector<double>(40, 0.0)}, {"a", "z"}, 8);
    CHECK(std::isnan(m.entries(0, 1)));
    CHECK(std::isnan(m.entries(1, 1)));
    CHECK(m.entries(0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("distinct exact-bin cosines") {
    std::vector<double> x1 = cosine(241, 2.0 / 24.0);
    std::vector<double> x2 = cosine(241, 5.0 / 24.0, 0.7, 1.0);
    std::vector<double> sum(241);
    for (std::size_t t = 0; t < 241; ++t) sum[t] = x1[t] + x2[t];
    const auto elem = cissa_elementary(sum, 24);
    const auto m = w_correlation_matrix({elem[2].values, elem[5].values}, {"k3", "k6"}, 24);
    CHECK(std::abs(m.entries(0, 1)) < 0.01);
  }
  SUBCASE("decomposition overload is symmetric with unit diagonal") {
    const auto y = ar1_series(300, 0.6, 9);
    const auto d = cissa::cissa(y, 24, default_monthly_grouping(24));
    const auto m = w_correlation_matrix(d);
    REQUIRE(m.labels.size() == d.components.size());
    CHECK(m.weights.size() == y.size());
    for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
      CHECK(std::abs(m.entries(i, i) - 1.0) < 1e-10);
      for (Eigen::Index j = 0; j < m.entries.cols(); ++j) {
        CHECK(m.entries(i, j) == m.entries(j, i));
        CHECK(std::abs(m.entries(i, j)) <= 1.0 + 1e-10);
        CHECK(m.absolute(i, j) == std::abs(m.entries(i, j)));
      }
    }
  }
}

TEST_CASE("regression check") {
  const auto y = gaussian_noise(30, 4);
  auto affine = [&](double scale, double shift) {
    std::vector<double> out(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) out[t] = scale * y[t] + shift;
    return out;
  };
  auto r = regression_check(y, y, "same");
  CHECK(r.label == "same");
  CHECK(std::abs(r.intercept) < 1e-12);
  CHECK(std::abs(r.slope - 1.0) < 1e-12);
  r = regression_check(y, affine(2.0, 0.0));
  CHECK(std::abs(r.intercept) < 1e-12);
  CHECK(std::abs(r.slope - 0.5) < 1e-12);
  r = regression_check(y, affine(1.0, -3.0));
  CHECK(std::abs(r.intercept - 3.0) < 1e-12);
  CHECK(std::abs(r.slope - 1.0) < 1e-12);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    double c = u(rng);
    if (std::abs(c) < 0.1) c = 1.0;
    const double d = u(rng);
    // extracted = c y + d, so y = -d/c + (1/c) extracted
    r = regression_check(y, affine(c, d));
    CHECK(std::abs(r.slope - 1.0 / c) < 1e-10);
    CHECK(std::abs(r.intercept + d / c) < 1e-10);
  }

  CHECK(code_of([&] { regression_check(y, std::vector<double>(30, 2.0)); }) == ErrorCode::DegenerateRegressor);
  CHECK(code_of([&] { regression_check(std::vector<double>{1, 2}, std::vector<double>{1, 2}); }) ==
        ErrorCode::InvalidParams);
}

TEST_CASE("ar1 fit") {
  SUBCASE("white noise") {
    const auto e = gaussian_noise(10000, 12, 0.06);
    const auto f = ar1_fit(e);
    CHECK(f.stddev >= 0.055);
    CHECK(f.stddev <= 0.065);
    CHECK(std::abs(f.ar_coefficient) < 0.05);
  }
  SUBCASE("noise-free recursion") {
    // the fit demeans, so the recursion only holds up to 0.2 mu; a long record makes mu small
    std::vector<double> x(20000);
    x[0] = 1.0;
    for (std::size_t t = 1; t < x.size(); ++t) x[t] = 0.8 * x[t - 1];
    const auto f = ar1_fit(x);
    CHECK(std::abs(f.ar_coefficient - 0.8) < 1e-6);
  }
  SUBCASE("zeros") {
    const auto f = ar1_fit(std::vector<double>(20, 0.0));
    CHECK(f.mean == 0.0);
    CHECK(f.stddev == 0.0);
    CHECK(f.ar_coefficient == 0.0);
  }
  SUBCASE("sample moments") {
    const std::vector<double> x{1, 2, 3, 4};
    const auto f = ar1_fit(x);
    CHECK(f.mean == doctest::Approx(2.5));
    CHECK(f.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
    // centered: -1.5 -0.5 0.5 1.5; sum x_t x_{t-1} = 0.75 - 0.25 + 0.75, sum x_{t-1}^2 = 2.25 + 0.25 + 0.25
    CHECK(f.ar_coefficient == doctest::Approx(1.25 / 2.75));
  }
}

TEST_CASE("residual seasonality screen") {
  const auto freqs = seasonal_frequencies(12);
  CHECK(freqs.size() == 6);
  CHECK(freqs.back() == 0.5);
  SUBCASE("white noise") {
    const auto e = gaussian_noise(2400, 21);
    const auto r = residual_seasonality_check(e, freqs);
    CHECK(!r.any_flagged());
    CHECK(r.threshold == 0.01);
    CHECK(r.method.find("not the X-12-ARIMA") != std::string::npos);
  }
  SUBCASE("injected cosine") {
    auto e = gaussian_noise(2400, 21);
    const auto c = cosine(e.size(), 1.0 / 12.0, 0.5);
    for (std::size_t t = 0; t < e.size(); ++t) e[t] += c[t];
    const auto r = residual_seasonality_check(e, freqs);
    CHECK(r.any_flagged());
    CHECK(r.shares[0].flagged);
    CHECK(r.shares[0].frequency == doctest::Approx(1.0 / 12.0));
  }
  SUBCASE("zeros") {
    const auto r = residual_seasonality_check(std::vector<double>(100, 0.0), freqs);
    CHECK(!r.any_flagged());
    for (const auto& s : r.shares) CHECK(s.share == 0.0);
  }
}

TEST_CASE("paired halves are more alike than distinct bins") {
  LinearModelParams p;
  p.seed = 77;
  const auto r = simulate_linear(p);
  const auto elem = cissa_elementary(r.observed, 48);
  double cross = 0.0;
  for (std::size_t i = 0; i < elem.size(); ++i)
    for (std::size_t j = i + 1; j < elem.size(); ++j)
      cross = std::max(cross, std::abs(w_correlation(elem[i].values, elem[j].values, 48)));
  double within = 1.0;
  for (const auto& e : elem) {
    if (e.parts.size() != 2) continue;
    within = std::min(within, std::abs(w_correlation(e.parts[0], e.parts[1], 48)));
  }
  MESSAGE("max cross-bin |w-corr| " << cross << ", min within-bin " << within);
  CHECK(within > cross);
}
