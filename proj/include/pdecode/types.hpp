#ifndef PDECODE_TYPES_HPP
#define PDECODE_TYPES_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace pdecode {

using RealVec = std::vector<double>;
using CplxVec = std::vector<std::complex<double>>;
using BitVec = std::vector<std::uint8_t>;     // entries in {0,1}
using BipolarWord = std::vector<std::int8_t>; // entries in {+1,-1}

// sgn with the documented tie-break sgn(0) = +1.
inline double sign_pos(double v) { return v < 0.0 ? -1.0 : 1.0; }

inline BipolarWord hard_decision(const RealVec& x) {
  BipolarWord w(x.size());
  for (size_t j = 0; j < x.size(); ++j) w[j] = x[j] < 0.0 ? -1 : 1;
  return w;
}

inline BipolarWord bipolar_map(const BitVec& b) {
  BipolarWord w(b.size());
  for (size_t j = 0; j < b.size(); ++j) w[j] = b[j] ? -1 : 1;
  return w;
}

inline BitVec binary_map(const BipolarWord& w) {
  BitVec b(w.size());
  for (size_t j = 0; j < w.size(); ++j) b[j] = w[j] < 0 ? 1 : 0;
  return b;
}

} // namespace pdecode

#endif
