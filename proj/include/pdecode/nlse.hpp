#ifndef PDECODE_NLSE_HPP
#define PDECODE_NLSE_HPP

#include <cstddef>
#include <memory>
#include <vector>

#include "pdecode/fft.hpp"
#include "pdecode/types.hpp"

namespace pdecode {

// Discretization of the normalized NLSE
//   dU/dxi = -(i s / 2) d^2U/dtau^2 + i N^2 |U|^2 U
// on a periodic tau window [0, tau_span) with n_tau samples (power of two),
// solved by the symmetrized split-step Fourier method over n_steps steps of
// length ell_xi. Angular frequencies follow FFT ordering,
// omega_k = 2 pi k / tau_span for k in the signed index range.
struct NlseGrid {
  int s_sign = 1;       // sign of the dispersion constant
  double n_sq = 1.0;    // nonlinearity coefficient N^2
  size_t n_tau = 0;     // time-grid size, power of two
  double tau_span = 0;  // total normalized time window
  double ell_xi = 0;    // step length in xi
  size_t n_steps = 0;

  NlseGrid(int s_sign, double n_sq, size_t n_tau, double tau_span, double ell_xi, size_t n_steps);

  double xi_end() const { return static_cast<double>(n_steps) * ell_xi; }
  double dtau() const { return tau_span / static_cast<double>(n_tau); }
};

using ComplexField = CplxVec;

class SsfmSolver {
 public:
  explicit SsfmSolver(const NlseGrid& grid);

  const NlseGrid& grid() const { return grid_; }

  // Linear propagation over distance fraction * ell_xi: each spectral
  // component is multiplied by the all-pass factor
  // exp(i * s * omega^2 * fraction * ell_xi / 2). fraction must be in (0, 1].
  ComplexField dispersion_half_step(const ComplexField& U, double fraction) const;

  // Entrywise self-phase modulation over one full step:
  // U_k -> U_k exp(i N^2 |U_k|^2 ell_xi). |U_k| is invariant.
  ComplexField nonlinear_step(const ComplexField& U) const;

  // n_steps of (half dispersion, full nonlinear, half dispersion).
  ComplexField solve(const ComplexField& U0) const;

  // Exact per-step inversion of solve: the inverse sub-steps (negated phase
  // factors) applied in reversed order. reverse(solve(U)) == U up to roundoff.
  ComplexField reverse_propagate(const ComplexField& U) const;

  // Gradient of sum_i |y_i - U_final[sensors_i]|^2 with respect to the real
  // and imaginary parts of U0, packed as a complex vector
  // g_k = dL/dRe(U0_k) + i dL/dIm(U0_k). Reverse-mode traversal of the
  // recorded step sequence: the dispersion adjoint conjugates the phase
  // factor, the nonlinear adjoint applies
  //   g <- g_out e^{-i theta} (1 - i c rho) + conj(g_out) e^{i theta} i c U^2,
  // with rho = |U|^2, theta = c rho, c = N^2 ell_xi, at the taped field U.
  ComplexField input_gradient(const ComplexField& U0, const CplxVec& y,
                              const std::vector<size_t>& sensors) const;

  // forward solve that also reports the per-step fields entering the
  // nonlinear sub-step (the tape the backward pass needs)
  ComplexField solve_with_tape(const ComplexField& U0, std::vector<ComplexField>& tape) const;

  // reverse sweep from a final-field gradient to the input-field gradient
  ComplexField backward(ComplexField g_final, const std::vector<ComplexField>& tape) const;

 private:
  void apply_dispersion(ComplexField& U, double distance) const; // any sign
  void apply_nonlinear(ComplexField& U, double sign) const;

  NlseGrid grid_;
  Fft fft_;
  RealVec omega_sq_; // omega_k^2 in FFT ordering
};

// Discrete field energy sum_k |U_k|^2 * dtau.
double field_energy(const ComplexField& U, const NlseGrid& grid);

} // namespace pdecode

#endif
