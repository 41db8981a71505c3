#ifndef PDECODE_HEAT_HPP
#define PDECODE_HEAT_HPP

#include <cstddef>
#include <vector>

#include "pdecode/types.hpp"

namespace pdecode {

// Explicit FDM grid for the 1-D heat equation u_t = lambda u_xx on
// [0, T] x [0, L] with zero Dirichlet boundaries. The state vector holds the
// interior points x = ell, 2 ell, ..., (n_x - 1) ell; the boundary cells are
// implicit zeros. Construction rejects Courant numbers outside [0, 1/2].
struct HeatGrid {
  double lambda = 0.0;
  double h = 0.0;   // time step
  double ell = 0.0; // spatial step
  size_t n_x = 0;   // spatial cell count (interior points 1 .. n_x - 1)
  size_t n_t = 0;   // time step count

  HeatGrid(double lambda, double h, double ell, size_t n_x, size_t n_t);

  double courant() const { return lambda * h / (ell * ell); }
  double horizon() const { return static_cast<double>(n_t) * h; }
  double length() const { return static_cast<double>(n_x) * ell; }
  size_t state_size() const { return n_x - 1; }
};

// One explicit update u <- (1 - 2c) u_i + c u_{i+1} + c u_{i-1} with zero
// virtual boundary cells. Stable (and a convex combination) for 0 <= c <= 1/2.
RealVec fdm_step(const RealVec& u, double c);

// n_t applications of fdm_step.
RealVec fdm_solve(const RealVec& u0, const HeatGrid& grid);

// Gradient of ||y - S fdm_solve(u0)||^2 with respect to u0, where S gathers
// the (0-based interior) sensor indices. The interior update operator is
// symmetric, so the adjoint pass is the same iteration applied to the
// scattered residual 2 (r - y); no tape is needed.
RealVec fdm_input_gradient(const RealVec& u0, const RealVec& y,
                           const std::vector<size_t>& sensors, const HeatGrid& grid);

} // namespace pdecode

#endif
