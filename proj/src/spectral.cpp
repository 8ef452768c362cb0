#include "cissa/spectral.hpp"

#include "cissa/error.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cissa {

namespace {

std::vector<std::complex<double>> forward_dft(std::span<const double> v) {
  Eigen::FFT<double> fft;
  std::vector<double> in(v.begin(), v.end());
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  out.resize(v.size());  // Eigen may return only the half spectrum for real input
  for (std::size_t j = v.size() / 2 + 1; j < v.size(); ++j) out[j] = std::conj(out[v.size() - j]);
  return out;
}

}  // namespace

bool has_small_prime_factors(std::size_t n) noexcept {
  if (n == 0) return false;
  for (std::size_t p : {2u, 3u, 5u}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

std::vector<double> circulant_eigenvalues_direct(std::span<const double> first_row) {
  const std::size_t L = first_row.size();
  std::vector<double> out(L, 0.0);
  for (std::size_t k = 0; k < L; ++k) {
    double re = 0.0;
    for (std::size_t m = 0; m < L; ++m) {
      // Reduce m*k mod L before scaling so the angle stays exact for large L.
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((m * k) % L) / static_cast<double>(L);
      re += first_row[m] * std::cos(angle);
    }
    out[k] = re;
  }
  return out;
}

std::vector<double> circulant_eigenvalues_fft(std::span<const double> first_row) {
  // A symmetric row (c_m = c_{L-m}) has a real transform, so the sign of the
  // exponent does not matter.
  const auto spectrum = forward_dft(first_row);
  std::vector<double> out(first_row.size());
  std::transform(spectrum.begin(), spectrum.end(), out.begin(), [](const auto& z) { return z.real(); });
  return out;
}

std::vector<double> circulant_eigenvalues(std::span<const double> first_row) {
  if (has_small_prime_factors(first_row.size())) return circulant_eigenvalues_fft(first_row);
  return circulant_eigenvalues_direct(first_row);
}

std::vector<FrequencyEigentriple> circulant_eigentriples(const SecondMomentMatrix& matrix) {
  if (matrix.variant != Variant::Circulant) {
    throw Error(ErrorCode::VariantMismatch, "closed-form eigentriples need a circulant matrix");
  }
  const std::size_t L = matrix.window_length();
  std::vector<double> row(L);
  for (std::size_t m = 0; m < L; ++m) row[m] = matrix.entries(0, static_cast<Eigen::Index>(m));
  const auto eigenvalues = circulant_eigenvalues(row);

  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  std::vector<FrequencyEigentriple> out(L);
  for (std::size_t k = 0; k < L; ++k) {
    auto& triple = out[k];
    triple.index = k + 1;
    triple.frequency = static_cast<double>(k) / static_cast<double>(L);
    triple.eigenvalue = eigenvalues[k];
    triple.eigenvector.resize(static_cast<Eigen::Index>(L));
    for (std::size_t j = 0; j < L; ++j) {
      const double angle =
          -2.0 * std::numbers::pi * static_cast<double>((j * k) % L) / static_cast<double>(L);
      triple.eigenvector[static_cast<Eigen::Index>(j)] = std::polar(scale, angle);
    }
  }
  return out;
}

std::vector<Eigentriple> symmetric_eigentriples(const SecondMomentMatrix& matrix) {
  if (matrix.variant == Variant::Circulant) {
    throw Error(ErrorCode::VariantMismatch, "symmetric eigentriples expect a Basic or Toeplitz matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix.entries);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");
  }
  const auto L = matrix.entries.rows();
  std::vector<Eigentriple> out(static_cast<std::size_t>(L));
  // Eigen returns ascending order.
  for (Eigen::Index r = 0; r < L; ++r) {
    const Eigen::Index src = L - 1 - r;
    auto& triple = out[static_cast<std::size_t>(r)];
    triple.index = static_cast<std::size_t>(r) + 1;
    triple.eigenvalue = solver.eigenvalues()[src];
    triple.eigenvector = solver.eigenvectors().col(src);
  }
  return out;
}

Periodogram periodogram(std::span<const double> vector) {
  const std::size_t n = vector.size();
  if (n < 2) throw Error(ErrorCode::InvalidParams, "periodogram needs at least two samples");
  require_finite(vector);
  const auto spectrum = forward_dft(vector);
  Periodogram out;
  const std::size_t half = n / 2;
  out.frequencies.resize(half + 1);
  out.powers.resize(half + 1);
  for (std::size_t j = 0; j <= half; ++j) {
    out.frequencies[j] = static_cast<double>(j) / static_cast<double>(n);
    out.powers[j] = std::norm(spectrum[j]) / static_cast<double>(n);
  }
  return out;
}

double dominant_frequency(const Periodogram& p) {
  if (p.powers.empty()) throw Error(ErrorCode::InvalidParams, "empty periodogram");
  // max_element returns the first maximum, which is the lowest frequency.
  const auto it = std::max_element(p.powers.begin(), p.powers.end());
  return p.frequencies[static_cast<std::size_t>(it - p.powers.begin())];
}

}  // namespace cissa
