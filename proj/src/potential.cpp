#include "pdecode/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace pdecode {

void PotentialParams::validate() const {
  if (!(alpha > 0)) throw std::invalid_argument("potential: alpha must be positive");
  if (!(beta > 0)) throw std::invalid_argument("potential: beta must be positive");
  if (!(epsilon_clamp > 0)) throw std::invalid_argument("potential: epsilon_clamp must be positive");
}

double bmod(double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("bmod: non-finite input");
  return a - 2.0 * std::floor(a / 2.0);
}

double potential_energy(const RealVec& x, const ParityCheckMatrix& H, const PotentialParams& p) {
  if (x.size() != H.cols()) throw std::invalid_argument("potential_energy: length mismatch");
  double bipolar = 0.0;
  for (double v : x) {
    const double t = v * v - 1.0;
    bipolar += t * t;
  }
  double parity = 0.0;
  for (size_t i = 0; i < H.rows(); ++i) {
    double prod = 1.0;
    for (size_t j : H.row_support(i)) prod *= x[j];
    const double t = prod - 1.0;
    parity += t * t;
  }
  return p.alpha * bipolar + p.beta * parity;
}

RealVec potential_gradient(const RealVec& x, const ParityCheckMatrix& H, const PotentialParams& p) {
  if (x.size() != H.cols()) throw std::invalid_argument("potential_gradient: length mismatch");
  const size_t n = x.size();
  const size_t m = H.rows();

  // clamped magnitude with original sign, sgn(0) = +1
  RealVec xc(n);
  for (size_t j = 0; j < n; ++j) {
    const double mag = std::max(std::abs(x[j]), p.epsilon_clamp);
    xc[j] = sign_pos(x[j]) * mag;
  }

  // d_i = prod_{j in A(i)} xc_j, split into magnitude (exp of summed logs) and
  // sign (parity of negative entries via bmod)
  RealVec d(m);
  for (size_t i = 0; i < m; ++i) {
    double log_sum = 0.0;
    double flip_sum = 0.0; // [H (1 - sgn(x))]_i / 2 = number of negative entries in A(i)
    for (size_t j : H.row_support(i)) {
      log_sum += std::log(std::abs(xc[j]));
      flip_sum += (1.0 - sign_pos(x[j])) * 0.5;
    }
    const double d_abs = std::exp(log_sum);
    const double d_sgn = 1.0 - 2.0 * bmod(flip_sum);
    d[i] = d_sgn * d_abs;
  }

  // H^T (d (.) d - d), then the entrywise division by (clamped) x
  RealVec ht(n, 0.0);
  for (size_t i = 0; i < m; ++i) {
    const double w = d[i] * d[i] - d[i];
    for (size_t j : H.row_support(i)) ht[j] += w;
  }
  RealVec g(n);
  for (size_t j = 0; j < n; ++j)
    g[j] = 4.0 * p.alpha * (x[j] * x[j] - 1.0) * x[j] + 2.0 * p.beta * ht[j] / xc[j];
  return g;
}

RealVec potential_gradient_naive(const RealVec& x, const ParityCheckMatrix& H, const PotentialParams& p) {
  if (x.size() != H.cols()) throw std::invalid_argument("potential_gradient_naive: length mismatch");
  const size_t n = x.size();
  RealVec g(n);
  for (size_t j = 0; j < n; ++j) g[j] = 4.0 * p.alpha * (x[j] * x[j] - 1.0) * x[j];
  for (size_t i = 0; i < H.rows(); ++i) {
    const auto& row = H.row_support(i);
    double prod = 1.0;
    for (size_t l : row) prod *= x[l];
    for (size_t j : row) {
      double rest = 1.0;
      for (size_t l : row)
        if (l != j) rest *= x[l];
      g[j] += 2.0 * p.beta * (prod - 1.0) * rest;
    }
  }
  return g;
}

} // namespace pdecode
