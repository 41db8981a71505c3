#include "pdecode/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace pdecode {

Fft::Fft(size_t n) : n_(n) {
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size must be a power of two");
  rev_.resize(n);
  size_t log2n = 0;
  while ((size_t{1} << log2n) < n) ++log2n;
  for (size_t i = 0; i < n; ++i) {
    size_t r = 0;
    for (size_t b = 0; b < log2n; ++b) r |= ((i >> b) & 1u) << (log2n - 1 - b);
    rev_[i] = r;
  }
  tw_.resize(n / 2);
  const double step = -2.0 * 3.141592653589793238462643383279502884 / static_cast<double>(n);
  for (size_t k = 0; k < n / 2; ++k) tw_[k] = std::polar(1.0, step * static_cast<double>(k));
}

void Fft::transform(std::complex<double>* a, bool inverse) const {
  const size_t n = n_;
  for (size_t i = 0; i < n; ++i)
    if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t half = len >> 1;
    const size_t stride = n / len;
    for (size_t base = 0; base < n; base += len) {
      for (size_t k = 0; k < half; ++k) {
        std::complex<double> w = tw_[k * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> t = a[base + k + half] * w;
        a[base + k + half] = a[base + k] - t;
        a[base + k] += t;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (size_t i = 0; i < n; ++i) a[i] *= scale;
}

void Fft::forward(std::complex<double>* a) const { transform(a, false); }
void Fft::inverse(std::complex<double>* a) const { transform(a, true); }

} // namespace pdecode
