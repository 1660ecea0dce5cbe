#include "dstable/fft.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "dstable/errors.hpp"

namespace dstable::detail {

namespace {

// e^{-2 pi i j / N} for j < N, each entry computed directly
std::vector<ComplexValue> twiddles(std::size_t n) {
  std::vector<ComplexValue> w(n);
  const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = std::polar(1.0, step * static_cast<double>(j));
  }
  return w;
}

}  // namespace

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_forward(std::vector<ComplexValue>& data) {
  const std::size_t n = data.size();
  if (!is_power_of_two(static_cast<long long>(n))) throw DomainError("fft: length must be a power of two");
  if (n == 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  const auto w = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const ComplexValue u = data[start + k];
        const ComplexValue v = data[start + k + half] * w[k * stride];
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

std::vector<ComplexValue> dft_forward(const std::vector<ComplexValue>& data) {
  const std::size_t n = data.size();
  if (!is_power_of_two(static_cast<long long>(n))) throw DomainError("dft: length must be a power of two");
  const auto w = twiddles(n);
  std::vector<ComplexValue> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    ComplexValue acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) acc += data[j] * w[(j * k) & (n - 1)];
    out[k] = acc;
  }
  return out;
}

}  // namespace dstable::detail
