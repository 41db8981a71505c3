#include "pdecode/nlse.hpp"

#include <cmath>
#include <stdexcept>

namespace pdecode {

NlseGrid::NlseGrid(int s_sign_, double n_sq_, size_t n_tau_, double tau_span_, double ell_xi_,
                   size_t n_steps_)
    : s_sign(s_sign_), n_sq(n_sq_), n_tau(n_tau_), tau_span(tau_span_), ell_xi(ell_xi_),
      n_steps(n_steps_) {
  if (s_sign != 1 && s_sign != -1) throw std::invalid_argument("nlse grid: s_sign must be +1 or -1");
  if (n_tau == 0 || (n_tau & (n_tau - 1)) != 0)
    throw std::invalid_argument("nlse grid: n_tau must be a power of two");
  if (!(tau_span > 0)) throw std::invalid_argument("nlse grid: tau_span must be positive");
  if (!(ell_xi > 0)) throw std::invalid_argument("nlse grid: ell_xi must be positive");
}

SsfmSolver::SsfmSolver(const NlseGrid& grid) : grid_(grid), fft_(grid.n_tau) {
  omega_sq_.resize(grid.n_tau);
  const double base = 2.0 * 3.141592653589793238462643383279502884 / grid.tau_span;
  const size_t n = grid.n_tau;
  for (size_t k = 0; k < n; ++k) {
    const double signed_k =
        k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
    const double w = base * signed_k;
    omega_sq_[k] = w * w;
  }
}

void SsfmSolver::apply_dispersion(ComplexField& U, double distance) const {
  fft_.forward(U.data());
  const double c = 0.5 * static_cast<double>(grid_.s_sign) * distance;
  for (size_t k = 0; k < U.size(); ++k) U[k] *= std::polar(1.0, c * omega_sq_[k]);
  fft_.inverse(U.data());
}

void SsfmSolver::apply_nonlinear(ComplexField& U, double sign) const {
  const double c = sign * grid_.n_sq * grid_.ell_xi;
  for (auto& u : U) u *= std::polar(1.0, c * std::norm(u));
}

ComplexField SsfmSolver::dispersion_half_step(const ComplexField& U, double fraction) const {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("dispersion_half_step: fraction must be in (0, 1]");
  if (U.size() != grid_.n_tau) throw std::invalid_argument("dispersion_half_step: field size mismatch");
  ComplexField out = U;
  apply_dispersion(out, fraction * grid_.ell_xi);
  return out;
}

ComplexField SsfmSolver::nonlinear_step(const ComplexField& U) const {
  if (U.size() != grid_.n_tau) throw std::invalid_argument("nonlinear_step: field size mismatch");
  ComplexField out = U;
  apply_nonlinear(out, +1.0);
  return out;
}

ComplexField SsfmSolver::solve(const ComplexField& U0) const {
  if (U0.size() != grid_.n_tau) throw std::invalid_argument("ssfm_solve: field size mismatch");
  ComplexField U = U0;
  const double half = 0.5 * grid_.ell_xi;
  for (size_t s = 0; s < grid_.n_steps; ++s) {
    apply_dispersion(U, half);
    apply_nonlinear(U, +1.0);
    apply_dispersion(U, half);
  }
  return U;
}

ComplexField SsfmSolver::solve_with_tape(const ComplexField& U0,
                                         std::vector<ComplexField>& tape) const {
  if (U0.size() != grid_.n_tau) throw std::invalid_argument("ssfm_solve: field size mismatch");
  tape.clear();
  tape.reserve(grid_.n_steps);
  ComplexField U = U0;
  const double half = 0.5 * grid_.ell_xi;
  for (size_t s = 0; s < grid_.n_steps; ++s) {
    apply_dispersion(U, half);
    tape.push_back(U); // field entering the nonlinear sub-step
    apply_nonlinear(U, +1.0);
    apply_dispersion(U, half);
  }
  return U;
}

ComplexField SsfmSolver::reverse_propagate(const ComplexField& U) const {
  if (U.size() != grid_.n_tau) throw std::invalid_argument("reverse_propagate: field size mismatch");
  ComplexField V = U;
  const double half = 0.5 * grid_.ell_xi;
  for (size_t s = 0; s < grid_.n_steps; ++s) {
    apply_dispersion(V, -half);
    apply_nonlinear(V, -1.0); // |V| equals the pre-rotation magnitude, so this inverts exactly
    apply_dispersion(V, -half);
  }
  return V;
}

ComplexField SsfmSolver::backward(ComplexField g, const std::vector<ComplexField>& tape) const {
  const double half = 0.5 * grid_.ell_xi;
  const double c = grid_.n_sq * grid_.ell_xi;
  for (size_t s = tape.size(); s-- > 0;) {
    apply_dispersion(g, -half); // adjoint of a unitary diagonal operator = conjugate phase
    const ComplexField& U = tape[s];
    for (size_t k = 0; k < g.size(); ++k) {
      const double rho = std::norm(U[k]);
      const std::complex<double> e_pos = std::polar(1.0, c * rho);
      const std::complex<double> gw = g[k];
      g[k] = gw * std::conj(e_pos) * std::complex<double>(1.0, -c * rho) +
             std::conj(gw) * e_pos * std::complex<double>(0.0, c) * (U[k] * U[k]);
    }
    apply_dispersion(g, -half);
  }
  return g;
}

ComplexField SsfmSolver::input_gradient(const ComplexField& U0, const CplxVec& y,
                                        const std::vector<size_t>& sensors) const {
  if (y.size() != sensors.size()) throw std::invalid_argument("ssfm_input_gradient: observation length mismatch");
  std::vector<ComplexField> tape;
  const ComplexField uf = solve_with_tape(U0, tape);

  ComplexField g(grid_.n_tau, {0.0, 0.0});
  for (size_t k = 0; k < sensors.size(); ++k) {
    const size_t idx = sensors[k];
    if (idx >= grid_.n_tau) throw std::invalid_argument("ssfm_input_gradient: sensor index out of range");
    g[idx] += 2.0 * (uf[idx] - y[k]);
  }
  return backward(std::move(g), tape);
}

double field_energy(const ComplexField& U, const NlseGrid& grid) {
  double e = 0.0;
  for (const auto& u : U) e += std::norm(u);
  return e * grid.dtau();
}

} // namespace pdecode
