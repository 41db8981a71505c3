#ifndef PDECODE_POTENTIAL_HPP
#define PDECODE_POTENTIAL_HPP

#include "pdecode/gf2.hpp"
#include "pdecode/types.hpp"

namespace pdecode {

struct PotentialParams {
  double alpha = 1.0;         // bipolar-constraint weight
  double beta = 1.0;          // parity-constraint weight
  double epsilon_clamp = 1e-8; // magnitude guard for the log/division path

  void validate() const;
};

// Real remainder modulo 2: a - 2*floor(a/2), in [0, 2). Throws on non-finite input.
double bmod(double a);

// Code potential energy
//   h(x) = alpha * sum_j (x_j^2 - 1)^2 + beta * sum_i (prod_{j in A(i)} x_j - 1)^2.
// Nonnegative everywhere; zero exactly on the bipolar codewords of C(H).
double potential_energy(const RealVec& x, const ParityCheckMatrix& H, const PotentialParams& p);

// Vectorized gradient (production path):
//   grad h = 4 alpha (x (.) x - 1) (.) x + 2 beta H^T (d (.) d - d) / x,
//   d = d_sgn (.) d_abs,  d_abs = exp(H ln|x|),
//   d_sgn = 1 - 2 bmod(H (1 - sgn(x)) / 2),  with sgn(0) = +1.
// Components with |x_j| < epsilon_clamp enter the log/division path at the
// clamped magnitude with their original sign; the polynomial first term uses
// the raw x (it has no singularity).
RealVec potential_gradient(const RealVec& x, const ParityCheckMatrix& H, const PotentialParams& p);

// Term-by-term product-rule gradient (permanent test oracle, no logs, no clamping):
//   dh/dx_j = 4 alpha (x_j^2 - 1) x_j
//           + 2 beta sum_{i in B(j)} (prod_{l in A(i)} x_l - 1) prod_{l in A(i)\{j}} x_l.
RealVec potential_gradient_naive(const RealVec& x, const ParityCheckMatrix& H, const PotentialParams& p);

} // namespace pdecode

#endif
