#include "dsplit/fft.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dsplit/errors.hpp"

namespace dsplit {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

FftPlan::FftPlan(std::size_t n) : n_(n), radix2_(is_power_of_two(n)) {
  if (n == 0) throw ContractViolation("FFT length must be positive");
  const double two_pi = 2.0 * std::numbers::pi;
  if (radix2_) {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    bit_reverse_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      bit_reverse_[i] = r;
    }
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
      twiddles_[k] = std::polar(1.0, -two_pi * static_cast<double>(k) / static_cast<double>(n));
  } else {
    twiddles_.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      twiddles_[k] = std::polar(1.0, -two_pi * static_cast<double>(k) / static_cast<double>(n));
    scratch_.resize(n);
  }
}

void FftPlan::forward(std::span<Complex> data) const { transform(data, false); }

void FftPlan::inverse(std::span<Complex> data) const {
  transform(data, true);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& x : data) x *= scale;
}

void FftPlan::transform(std::span<Complex> data, bool inverse) const {
  if (data.size() != n_)
    throw ContractViolation("FFT plan of length " + std::to_string(n_) + " applied to " + std::to_string(data.size()) +
                            " samples");
  if (radix2_) radix2_transform(data, inverse);
  else direct_transform(data, inverse);
}

void FftPlan::radix2_transform(std::span<Complex> data, bool inverse) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j = bit_reverse_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = twiddles_[k * stride];
        if (inverse) w = std::conj(w);
        const Complex even = data[start + k];
        const Complex odd = w * data[start + k + half];
        data[start + k] = even + odd;
        data[start + k + half] = even - odd;
      }
    }
  }
}

void FftPlan::direct_transform(std::span<Complex> data, bool inverse) const {
  for (std::size_t k = 0; k < n_; ++k) {
    Complex sum{0.0, 0.0};
    for (std::size_t j = 0; j < n_; ++j) {
      Complex w = twiddles_[(j * k) % n_];
      if (inverse) w = std::conj(w);
      sum += data[j] * w;
    }
    scratch_[k] = sum;
  }
  std::copy(scratch_.begin(), scratch_.end(), data.begin());
}

std::vector<Complex> fft(std::span<const Complex> x) {
  std::vector<Complex> out(x.begin(), x.end());
  FftPlan(x.size()).forward(out);
  return out;
}

std::vector<Complex> ifft(std::span<const Complex> x) {
  std::vector<Complex> out(x.begin(), x.end());
  FftPlan(x.size()).inverse(out);
  return out;
}

}  // namespace dsplit
