#include "pdecode/heat.hpp"

#include <stdexcept>
#include <string>

namespace pdecode {

HeatGrid::HeatGrid(double lambda_, double h_, double ell_, size_t n_x_, size_t n_t_)
    : lambda(lambda_), h(h_), ell(ell_), n_x(n_x_), n_t(n_t_) {
  if (!(lambda > 0) || !(h > 0) || !(ell > 0))
    throw std::invalid_argument("heat grid: lambda, h, ell must be positive");
  if (n_x < 3) throw std::invalid_argument("heat grid: n_x must be at least 3");
  const double c = courant();
  if (!(c >= 0.0) || c > 0.5)
    throw std::invalid_argument("heat grid: Courant number " + std::to_string(c) +
                                " violates 0 <= c <= 1/2");
}

RealVec fdm_step(const RealVec& u, double c) {
  const size_t n = u.size();
  RealVec v(n);
  const double a = 1.0 - 2.0 * c;
  for (size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? u[i - 1] : 0.0;
    const double right = i + 1 < n ? u[i + 1] : 0.0;
    v[i] = a * u[i] + c * (left + right);
  }
  return v;
}

namespace {

void fdm_step_inplace(RealVec& u, RealVec& scratch, double c) {
  const size_t n = u.size();
  const double a = 1.0 - 2.0 * c;
  for (size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? u[i - 1] : 0.0;
    const double right = i + 1 < n ? u[i + 1] : 0.0;
    scratch[i] = a * u[i] + c * (left + right);
  }
  u.swap(scratch);
}

} // namespace

RealVec fdm_solve(const RealVec& u0, const HeatGrid& grid) {
  if (u0.size() != grid.state_size()) throw std::invalid_argument("fdm_solve: length mismatch");
  RealVec u = u0;
  RealVec scratch(u.size());
  const double c = grid.courant();
  for (size_t t = 0; t < grid.n_t; ++t) fdm_step_inplace(u, scratch, c);
  return u;
}

RealVec fdm_input_gradient(const RealVec& u0, const RealVec& y,
                           const std::vector<size_t>& sensors, const HeatGrid& grid) {
  if (u0.size() != grid.state_size()) throw std::invalid_argument("fdm_input_gradient: length mismatch");
  if (y.size() != sensors.size()) throw std::invalid_argument("fdm_input_gradient: observation length mismatch");
  const RealVec uT = fdm_solve(u0, grid);
  RealVec adj(u0.size(), 0.0);
  for (size_t k = 0; k < sensors.size(); ++k) {
    const size_t idx = sensors[k];
    if (idx >= u0.size()) throw std::invalid_argument("fdm_input_gradient: sensor index out of range");
    adj[idx] += 2.0 * (uT[idx] - y[k]);
  }
  RealVec scratch(adj.size());
  const double c = grid.courant();
  for (size_t t = 0; t < grid.n_t; ++t) fdm_step_inplace(adj, scratch, c);
  return adj;
}

} // namespace pdecode
