#ifndef PDECODE_RNG_HPP
#define PDECODE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace pdecode {

// Seedable, splittable random stream. A stream is identified by
// (master seed, path), where the path is a short list of integers such as
// {salt, sigma_index, trial_index}. Distinct paths give statistically
// independent streams, so Monte-Carlo trials can run in any order or in
// parallel and still reproduce bit-identical results.
//
// The engine is std::mt19937_64 (bit-exact across platforms per the C++
// standard); uniform and Gaussian variates are derived here rather than
// through std::*_distribution, whose output is implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path)
      : engine_(derive(master_seed, path.begin(), path.size())) {}

  RngStream(std::uint64_t master_seed, const std::uint64_t* path, size_t len)
      : engine_(derive(master_seed, path, len)) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller; consumes exactly two uniforms per call
  double gaussian() {
    const double u1 = 1.0 - uniform(); // (0, 1], keeps the log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive(std::uint64_t master, const std::uint64_t* path, size_t len) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    for (size_t i = 0; i < len; ++i) {
      s ^= path[i] + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
      h = splitmix64(s);
    }
    return h;
  }

  std::mt19937_64 engine_;
};

} // namespace pdecode

#endif
