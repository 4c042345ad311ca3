#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dsplit {

using Complex = std::complex<double>;

bool is_power_of_two(std::size_t n) noexcept;

/// Precomputed transform of a fixed length. Power-of-two lengths use an
/// iterative radix-2 Cooley-Tukey transform; other lengths fall back to a
/// direct O(N^2) DFT.
///
/// forward() is unnormalised, inverse() applies the 1/N factor. Both work in
/// place and do not allocate.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  bool radix2() const noexcept { return radix2_; }

  void forward(std::span<Complex> data) const;
  void inverse(std::span<Complex> data) const;

 private:
  void transform(std::span<Complex> data, bool inverse) const;
  void radix2_transform(std::span<Complex> data, bool inverse) const;
  void direct_transform(std::span<Complex> data, bool inverse) const;

  std::size_t n_;
  bool radix2_;
  std::vector<std::size_t> bit_reverse_;
  std::vector<Complex> twiddles_;  // e^{-2 pi i k / N}, k < N/2 (radix-2) or k < N (direct)
  mutable std::vector<Complex> scratch_;  // direct path only
};

std::vector<Complex> fft(std::span<const Complex> x);
std::vector<Complex> ifft(std::span<const Complex> x);

}  // namespace dsplit
