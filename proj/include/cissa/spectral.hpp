#pragma once

#include "cissa/moments.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cissa {

/// Eigentriple of the circulant second-moment matrix, tied a priori to a frequency.
struct FrequencyEigentriple {
  double eigenvalue = 0.0;
  Eigen::VectorXcd eigenvector;  // u_k,j = exp(-i 2 pi j (k-1) / L) / sqrt(L), j = 0..L-1
  std::size_t index = 0;         // k, 1-based
  double frequency = 0.0;        // (k - 1) / L cycles per unit time
};

/// Eigenpair of a Basic or Toeplitz matrix, ordered by decreasing eigenvalue.
struct Eigentriple {
  double eigenvalue = 0.0;
  Eigen::VectorXd eigenvector;
  std::size_t index = 0;  // 1-based rank
};

struct Periodogram {
  std::vector<double> frequencies;  // j / n, j = 0..floor(n/2)
  std::vector<double> powers;
};

/// True when n factors entirely into 2, 3 and 5.
bool has_small_prime_factors(std::size_t n) noexcept;

/// lambda_k = sum_m c_m exp(i 2 pi m (k-1) / L), real part, k = 1..L.
/// Uses an FFT when L has only small prime factors, direct summation otherwise.
std::vector<double> circulant_eigenvalues(std::span<const double> first_row);
std::vector<double> circulant_eigenvalues_direct(std::span<const double> first_row);
std::vector<double> circulant_eigenvalues_fft(std::span<const double> first_row);

/// Closed-form eigenstructure, ordered by frequency index k = 1..L (not by magnitude).
std::vector<FrequencyEigentriple> circulant_eigentriples(const SecondMomentMatrix& matrix);

/// Full symmetric eigendecomposition, eigenvalues descending.
std::vector<Eigentriple> symmetric_eigentriples(const SecondMomentMatrix& matrix);

/// powers[j] = |sum_t v_t exp(-i 2 pi j t / n)|^2 / n for j = 0..floor(n/2).
Periodogram periodogram(std::span<const double> vector);

/// Frequency of maximal power; ties go to the lowest frequency.
double dominant_frequency(const Periodogram& p);

}  // namespace cissa
