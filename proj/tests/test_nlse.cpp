#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "pdecode/fft.hpp"
#include "pdecode/nlse.hpp"
#include "pdecode/rng.hpp"

using namespace pdecode;

namespace {

ComplexField random_field(RngStream& rng, size_t n, double scale = 1.0) {
  ComplexField U(n);
  for (auto& v : U) v = {scale * rng.gaussian(), scale * rng.gaussian()};
  return U;
}

double rel_l2(const ComplexField& a, const ComplexField& b) {
  double num = 0, den = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    num += std::norm(a[k] - b[k]);
    den += std::norm(b[k]);
  }
  return std::sqrt(num / den);
}

ComplexField gaussian_pulse(const NlseGrid& grid, double center, double width) {
  ComplexField U(grid.n_tau);
  for (size_t k = 0; k < grid.n_tau; ++k) {
    const double tau = static_cast<double>(k) * grid.dtau() - center;
    U[k] = std::exp(-tau * tau / (2 * width * width));
  }
  return U;
}

double nlse_loss(const CplxVec& U0, const CplxVec& y, const std::vector<size_t>& sensors,
                 const SsfmSolver& solver) {
  const CplxVec uf = solver.solve(U0);
  double loss = 0;
  for (size_t k = 0; k < sensors.size(); ++k) loss += std::norm(uf[sensors[k]] - y[k]);
  return loss;
}

} // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(NlseGrid(2, 1.0, 64, 16.0, 0.025, 10), std::invalid_argument);
  CHECK_THROWS_AS(NlseGrid(1, 1.0, 100, 16.0, 0.025, 10), std::invalid_argument);
  CHECK_THROWS_AS(NlseGrid(1, 1.0, 64, -1.0, 0.025, 10), std::invalid_argument);
  CHECK_THROWS_AS(NlseGrid(1, 1.0, 64, 16.0, 0.0, 10), std::invalid_argument);
  const NlseGrid g(1, 1.0, 64, 16.0, 0.025, 20);
  CHECK(g.xi_end() == doctest::Approx(0.5));
  CHECK(g.dtau() == doctest::Approx(0.25));
}

TEST_CASE("dispersion step is all-pass") {
  const NlseGrid grid(1, 1.0, 64, 16.0, 0.1, 5);
  const SsfmSolver solver(grid);

  const ComplexField zero(64, {0.0, 0.0});
  for (const auto& v : solver.dispersion_half_step(zero, 0.5)) CHECK(std::abs(v) == 0.0);

  RngStream rng(1, {0});
  const ComplexField U = random_field(rng, 64);
  const ComplexField V = solver.dispersion_half_step(U, 0.5);
  const Fft fft(64);
  auto su = U, sv = V;
  fft.forward(su.data());
  fft.forward(sv.data());
  for (size_t k = 0; k < 64; ++k)
    CHECK(std::abs(sv[k]) == doctest::Approx(std::abs(su[k])).epsilon(1e-12));

  CHECK_THROWS_AS(solver.dispersion_half_step(U, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solver.dispersion_half_step(U, 1.5), std::invalid_argument);
}

TEST_CASE("single Fourier mode is an eigenfunction of dispersion") {
  const NlseGrid grid(1, 1.0, 64, 16.0, 0.1, 5);
  const SsfmSolver solver(grid);
  const size_t mode = 5;
  ComplexField U(64);
  for (size_t k = 0; k < 64; ++k)
    U[k] = std::polar(1.0, 2.0 * M_PI * double(mode) * double(k) / 64.0);
  const ComplexField V = solver.dispersion_half_step(U, 1.0);
  // V = U * unit phase: the ratio must be constant with unit modulus
  const std::complex<double> ratio = V[0] / U[0];
  CHECK(std::abs(ratio) == doctest::Approx(1.0).epsilon(1e-12));
  const double omega = 2.0 * M_PI * double(mode) / grid.tau_span;
  const std::complex<double> expect = std::polar(1.0, 0.5 * omega * omega * grid.ell_xi);
  CHECK(std::abs(ratio - expect) <= 1e-12);
  for (size_t k = 0; k < 64; ++k) CHECK(std::abs(V[k] - ratio * U[k]) <= 1e-12);
}

TEST_CASE("nonlinear step is a pure phase rotation") {
  const NlseGrid grid(1, 2.0, 64, 16.0, 0.05, 5);
  const SsfmSolver solver(grid);
  RngStream rng(2, {0});
  const ComplexField U = random_field(rng, 64);
  const ComplexField V = solver.nonlinear_step(U);
  for (size_t k = 0; k < 64; ++k) {
    CHECK(std::abs(V[k]) == doctest::Approx(std::abs(U[k])).epsilon(1e-12));
    const std::complex<double> expect = U[k] * std::polar(1.0, 2.0 * 0.05 * std::norm(U[k]));
    CHECK(std::abs(V[k] - expect) <= 1e-12);
  }
}

TEST_CASE("nonlinearity-only evolution has the closed self-phase-modulation form") {
  const NlseGrid grid(1, 1.5, 128, 32.0, 0.02, 25);
  const SsfmSolver solver(grid);
  RngStream rng(3, {0});
  const ComplexField U0 = random_field(rng, 128);
  ComplexField U = U0;
  for (size_t s = 0; s < grid.n_steps; ++s) U = solver.nonlinear_step(U);
  for (size_t k = 0; k < U.size(); ++k) {
    const std::complex<double> expect =
        U0[k] * std::polar(1.0, grid.n_sq * std::norm(U0[k]) * grid.xi_end());
    CHECK(std::abs(U[k] - expect) <= 1e-10);
  }
}

TEST_CASE("linear-only solve composes into one dispersion factor") {
  const NlseGrid grid(1, 0.0, 64, 16.0, 0.025, 20);
  const SsfmSolver solver(grid);
  RngStream rng(4, {0});
  const ComplexField U0 = random_field(rng, 64);
  const ComplexField got = solver.solve(U0);
  // expected: full-length phase factor applied in the spectral domain
  const Fft fft(64);
  ComplexField want = U0;
  fft.forward(want.data());
  for (size_t k = 0; k < 64; ++k) {
    const double signed_k = k < 32 ? double(k) : double(k) - 64.0;
    const double omega = 2.0 * M_PI * signed_k / grid.tau_span;
    want[k] *= std::polar(1.0, 0.5 * omega * omega * grid.xi_end());
  }
  fft.inverse(want.data());
  CHECK(rel_l2(got, want) <= 1e-12);
}

TEST_CASE("energy is conserved through a full run") {
  const NlseGrid grid(1, 1.0, 256, 32.0, 0.025, 20);
  const SsfmSolver solver(grid);
  const ComplexField U0 = gaussian_pulse(grid, 16.0, 0.5);
  const double before = field_energy(U0, grid);
  const double after = field_energy(solver.solve(U0), grid);
  CHECK(std::abs(after - before) / before <= 1e-10);
}

TEST_CASE("reverse propagation undoes the forward solve") {
  const NlseGrid grid(1, 1.0, 256, 32.0, 0.025, 20);
  const SsfmSolver solver(grid);
  RngStream rng(5, {0});
  const ComplexField U0 = random_field(rng, 256, 0.7);
  const ComplexField round = solver.reverse_propagate(solver.solve(U0));
  CHECK(rel_l2(round, U0) <= 1e-9);

  const ComplexField zero(256, {0.0, 0.0});
  for (const auto& v : solver.reverse_propagate(zero)) CHECK(std::abs(v) == 0.0);

  const double before = field_energy(U0, grid);
  CHECK(std::abs(field_energy(solver.reverse_propagate(U0), grid) - before) / before <= 1e-10);
}

TEST_CASE("step halving shows second-order accuracy") {
  const double xi_end = 0.5;
  const ComplexField* dummy = nullptr;
  (void)dummy;
  const NlseGrid coarse(1, 1.0, 256, 32.0, xi_end / 10.0, 10);
  const NlseGrid fine(1, 1.0, 256, 32.0, xi_end / 20.0, 20);
  const NlseGrid reference(1, 1.0, 256, 32.0, xi_end / 160.0, 160);
  const ComplexField U0 = gaussian_pulse(coarse, 16.0, 1.0);
  const ComplexField ref = SsfmSolver(reference).solve(U0);
  const double e_coarse = rel_l2(SsfmSolver(coarse).solve(U0), ref);
  const double e_fine = rel_l2(SsfmSolver(fine).solve(U0), ref);
  const double ratio = e_coarse / e_fine;
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("input gradient: zero residual and the zero-step case") {
  const NlseGrid grid(1, 1.0, 64, 16.0, 0.025, 10);
  const SsfmSolver solver(grid);
  std::vector<size_t> sensors(64);
  for (size_t i = 0; i < 64; ++i) sensors[i] = i;
  RngStream rng(6, {0});
  const ComplexField U0 = random_field(rng, 64, 0.5);

  const ComplexField uf = solver.solve(U0);
  CplxVec y(64);
  for (size_t k = 0; k < 64; ++k) y[k] = uf[k];
  for (const auto& g : solver.input_gradient(U0, y, sensors)) CHECK(std::abs(g) <= 1e-12);

  const NlseGrid flat(1, 1.0, 64, 16.0, 0.025, 0);
  const SsfmSolver flat_solver(flat);
  CplxVec y2(64);
  for (auto& v : y2) v = {rng.gaussian(), rng.gaussian()};
  const ComplexField g = flat_solver.input_gradient(U0, y2, sensors);
  for (size_t k = 0; k < 64; ++k) {
    CHECK(g[k].real() == doctest::Approx(2.0 * (U0[k].real() - y2[k].real())));
    CHECK(g[k].imag() == doctest::Approx(2.0 * (U0[k].imag() - y2[k].imag())));
  }

  CHECK_THROWS_AS(solver.input_gradient(U0, y, {99}), std::invalid_argument);
}

TEST_CASE("input gradient matches finite differences") {
  const NlseGrid grid(1, 1.0, 64, 16.0, 0.025, 10);
  const SsfmSolver solver(grid);
  std::vector<size_t> sensors(64);
  for (size_t i = 0; i < 64; ++i) sensors[i] = i;
  const double step = 1e-6;
  for (std::uint64_t inst = 0; inst < 5; ++inst) {
    RngStream rng(7, {inst});
    const ComplexField U0 = random_field(rng, 64, 0.5);
    CplxVec y(64);
    for (auto& v : y) v = {0.5 * rng.gaussian(), 0.5 * rng.gaussian()};
    const ComplexField g = solver.input_gradient(U0, y, sensors);
    double num = 0, den = 0;
    for (size_t j = 0; j < 64; ++j) {
      ComplexField up = U0, dn = U0;
      up[j] += step;
      dn[j] -= step;
      const double fd_re =
          (nlse_loss(up, y, sensors, solver) - nlse_loss(dn, y, sensors, solver)) / (2 * step);
      up = U0;
      dn = U0;
      up[j] += std::complex<double>(0, step);
      dn[j] -= std::complex<double>(0, step);
      const double fd_im =
          (nlse_loss(up, y, sensors, solver) - nlse_loss(dn, y, sensors, solver)) / (2 * step);
      num = std::max({num, std::abs(g[j].real() - fd_re), std::abs(g[j].imag() - fd_im)});
      den = std::max({den, std::abs(fd_re), std::abs(fd_im)});
    }
    CHECK(num / den <= 1e-4);
  }
}

TEST_CASE("input gradient with a sparse sensor set") {
  const NlseGrid grid(1, 1.0, 64, 16.0, 0.025, 8);
  const SsfmSolver solver(grid);
  const std::vector<size_t> sensors{4, 20, 41, 60};
  RngStream rng(8, {0});
  const ComplexField U0 = random_field(rng, 64, 0.5);
  CplxVec y(4);
  for (auto& v : y) v = {rng.gaussian(), rng.gaussian()};
  const ComplexField g = solver.input_gradient(U0, y, sensors);
  const double step = 1e-6;
  for (size_t j = 0; j < 64; j += 7) {
    ComplexField up = U0, dn = U0;
    up[j] += step;
    dn[j] -= step;
    const double fd =
        (nlse_loss(up, y, sensors, solver) - nlse_loss(dn, y, sensors, solver)) / (2 * step);
    CHECK(g[j].real() == doctest::Approx(fd).epsilon(1e-4));
  }
}
