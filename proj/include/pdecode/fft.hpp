#ifndef PDECODE_FFT_HPP
#define PDECODE_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace pdecode {

// Radix-2 in-place FFT with unitary normalization (1/sqrt(n) in both
// directions), for power-of-two sizes. Twiddles and the bit-reversal table
// are precomputed per instance; transforms are const and thread-safe, so one
// plan can serve any number of concurrent Monte-Carlo trials.
class Fft {
 public:
  explicit Fft(size_t n);

  size_t size() const { return n_; }
  void forward(std::complex<double>* a) const;
  void inverse(std::complex<double>* a) const;

 private:
  void transform(std::complex<double>* a, bool inverse) const;

  size_t n_;
  std::vector<size_t> rev_;
  std::vector<std::complex<double>> tw_; // e^{-2 pi i k / n}, k < n/2
};

} // namespace pdecode

#endif
