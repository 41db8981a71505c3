#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "pdecode/channel.hpp"
#include "pdecode/gf2.hpp"

using namespace pdecode;

namespace {

RealVec to_real(const BipolarWord& w) {
  RealVec x(w.size());
  for (size_t j = 0; j < w.size(); ++j) x[j] = static_cast<double>(w[j]);
  return x;
}

} // namespace

TEST_CASE("gaussian pulse values") {
  CHECK(pulse(0.0, 0.3) == doctest::Approx(1.0));
  CHECK(pulse(0.3, 0.3) == doctest::Approx(std::exp(-0.5)));
  CHECK(pulse(-1.7, 0.4) == doctest::Approx(pulse(1.7, 0.4)));
  CHECK_THROWS_AS(pulse(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pulse(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("layout construction and validation") {
  const HeatGrid grid(0.2, 0.005, 0.05, 200, 100); // L = 10
  const ChannelLayout L = make_heat_layout(grid, 7, 0.2, 0.05, SensorMode::AllGridPoints);
  CHECK(L.pulse_centers.size() == 7);
  CHECK(L.sensor_indices.size() == grid.state_size());
  // evenly spaced at L/(n+1) = 1.25, snapped
  CHECK(L.pulse_centers[0] == doctest::Approx(1.25));
  CHECK(L.pulse_centers[6] == doctest::Approx(8.75));
  for (size_t i = 0; i < 7; ++i)
    CHECK(L.center_sensor_slots[i] != ChannelLayout::npos);

  // spacing below 6 t0 is rejected
  CHECK_THROWS_AS(make_heat_layout(grid, 7, 0.3, 0.05, SensorMode::AllGridPoints),
                  std::invalid_argument);
  // boundary clearance below 4 t0 is rejected (spacing pushes pulses out)
  CHECK_THROWS_AS(make_heat_layout(grid, 9, 0.2, 0.05, SensorMode::AllGridPoints, 1.2),
                  std::invalid_argument);
}

TEST_CASE("sensors at pulse centers only") {
  const HeatGrid grid(0.2, 0.005, 0.05, 200, 100);
  const ChannelLayout L = make_heat_layout(grid, 7, 0.2, 0.05, SensorMode::PulseCenters);
  CHECK(L.sensor_indices.size() == 7);
  CHECK(L.sensor_indices == L.center_indices);
  for (size_t i = 0; i < 7; ++i) CHECK(L.center_sensor_slots[i] == i);
}

TEST_CASE("waveform synthesis: single pulse, negation, sign pattern") {
  const HeatGrid grid(0.2, 0.005, 0.05, 200, 100);
  const ChannelLayout single = make_heat_layout(grid, 1, 0.2, 0.0, SensorMode::AllGridPoints);
  const RealVec u = synth_waveform(RealVec{1.0}, single, grid);
  const double peak = *std::max_element(u.begin(), u.end());
  CHECK(peak == doctest::Approx(1.0).epsilon(1e-9)); // center snapped to a grid point
  CHECK(u[single.center_indices[0]] == doctest::Approx(peak));

  const ChannelLayout L = make_heat_layout(grid, 7, 0.2, 0.0, SensorMode::AllGridPoints);
  const BipolarWord s{1, 1, -1, -1, 1, -1, 1};
  const RealVec b = synth_waveform(to_real(s), L, grid);
  RealVec neg = synth_waveform(to_real(s), L, grid);
  const RealVec bn = synth_waveform([&] {
    RealVec v = to_real(s);
    for (auto& x : v) x = -x;
    return v;
  }(), L, grid);
  for (size_t k = 0; k < b.size(); ++k) CHECK(bn[k] == doctest::Approx(-b[k]));
  // sign pattern at the pulse centers equals s
  for (size_t i = 0; i < 7; ++i)
    CHECK(sign_pos(b[L.center_indices[i]]) == doctest::Approx(double(s[i])));
}

TEST_CASE("waveform synthesis is linear in s") {
  const HeatGrid grid(0.2, 0.005, 0.05, 200, 100);
  const ChannelLayout L = make_heat_layout(grid, 7, 0.2, 0.0, SensorMode::AllGridPoints);
  const RealVec s1{0.3, -1.2, 0.7, 2.0, -0.1, 0.9, -0.4};
  const RealVec s2{1.1, 0.2, -0.8, 0.5, 1.4, -2.0, 0.6};
  const double a = 0.7, c = -1.3;
  RealVec combo(7);
  for (size_t i = 0; i < 7; ++i) combo[i] = a * s1[i] + c * s2[i];
  const RealVec lhs = synth_waveform(combo, L, grid);
  const RealVec w1 = synth_waveform(s1, L, grid);
  const RealVec w2 = synth_waveform(s2, L, grid);
  for (size_t k = 0; k < lhs.size(); ++k)
    CHECK(std::abs(lhs[k] - (a * w1[k] + c * w2[k])) <= 1e-12);
}

TEST_CASE("sensor sampling is a gather") {
  const HeatGrid grid(0.2, 0.005, 0.05, 20, 5);
  ChannelLayout L;
  L.t0 = 0.2;
  L.pulse_centers = {0.5};
  L.center_indices = {9};
  L.min_spacing = 0;
  L.sensor_indices = {2, 7, 11};
  L.sensor_positions = {0.15, 0.4, 0.6};
  RealVec u(grid.state_size());
  for (size_t k = 0; k < u.size(); ++k) u[k] = static_cast<double>(k);
  CHECK(sample_sensors(u, L) == RealVec{2.0, 7.0, 11.0});

  // permuting sensors permutes the output identically
  ChannelLayout P = L;
  P.sensor_indices = {11, 2, 7};
  CHECK(sample_sensors(u, P) == RealVec{11.0, 2.0, 7.0});

  ChannelLayout bad = L;
  bad.sensor_indices = {99};
  CHECK_THROWS_AS(sample_sensors(u, bad), std::invalid_argument);
}

TEST_CASE("full-grid sensors return the state unchanged") {
  const HeatGrid grid(0.2, 0.005, 0.05, 64, 10);
  const ChannelLayout L = make_heat_layout(grid, 3, 0.1, 0.0, SensorMode::AllGridPoints);
  RealVec u(grid.state_size());
  for (size_t k = 0; k < u.size(); ++k) u[k] = 0.1 * static_cast<double>(k);
  CHECK(sample_sensors(u, L) == u);
}

TEST_CASE("noise: sigma 0, determinism, sample statistics") {
  RealVec r(100000, 0.0);
  RngStream rng(42, {0});
  CHECK(add_noise(r, 0.0, rng) == r);
  CHECK_THROWS_AS(add_noise(r, -0.5, rng), std::invalid_argument);

  RngStream a(42, {1}), b(42, {1});
  const RealVec na = add_noise(RealVec(16, 0.0), 0.3, a);
  const RealVec nb = add_noise(RealVec(16, 0.0), 0.3, b);
  CHECK(na == nb);

  RngStream c(42, {2});
  const RealVec big = add_noise(r, 0.1, c);
  double mean = 0;
  for (double v : big) mean += v;
  mean /= double(big.size());
  double var = 0;
  for (double v : big) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / double(big.size() - 1));
  CHECK(sd >= 0.099);
  CHECK(sd <= 0.101);
}

TEST_CASE("complex noise perturbs both parts independently") {
  CplxVec r(50000, {0.0, 0.0});
  RngStream rng(43, {0});
  const CplxVec y = add_noise(r, 0.2, rng);
  double vr = 0, vi = 0, cross = 0;
  for (const auto& v : y) {
    vr += v.real() * v.real();
    vi += v.imag() * v.imag();
    cross += v.real() * v.imag();
  }
  vr /= double(y.size());
  vi /= double(y.size());
  cross /= double(y.size());
  CHECK(std::sqrt(vr) == doctest::Approx(0.2).epsilon(0.02));
  CHECK(std::sqrt(vi) == doctest::Approx(0.2).epsilon(0.02));
  CHECK(std::abs(cross) <= 0.002);
}

TEST_CASE("heat transmit composes the pipeline") {
  const HeatGrid flat(0.2, 0.005, 0.05, 200, 0); // n_t = 0: identity channel
  const ChannelLayout L = make_heat_layout(flat, 7, 0.05, 0.0, SensorMode::PulseCenters);
  const HeatChannel ch(flat, L);
  const BipolarWord s{1, -1, 1, 1, -1, -1, 1};
  RngStream rng(7, {0});
  const HeatObservation obs = ch.transmit(s, rng);
  REQUIRE(obs.y.size() == 7);
  for (size_t i = 0; i < 7; ++i) CHECK(sign_pos(obs.y[i]) == doctest::Approx(double(s[i])));
  CHECK(obs.true_word == s);

  // sigma = 0 equals the noiseless composition exactly
  const RealVec direct = sample_sensors(fdm_solve(synth_waveform(to_real(s), L, flat), flat), L);
  CHECK(obs.y == direct);
}

TEST_CASE("transmit determinism and amplitude bound") {
  const HeatGrid grid(0.2, 0.005, 0.05, 200, 100);
  const ChannelLayout L = make_heat_layout(grid, 7, 0.2, 0.05, SensorMode::AllGridPoints);
  const HeatChannel ch(grid, L);
  const BipolarWord s{1, 1, -1, -1, 1, -1, 1};

  RngStream r1(5, {1, 2}), r2(5, {1, 2});
  const HeatObservation a = ch.transmit(s, r1);
  const HeatObservation b = ch.transmit(s, r2);
  CHECK(a.y == b.y);

  // max principle composed with the gather plus a noise allowance
  const RealVec u0 = ch.synth(to_real(s));
  double umax = 0, ymax = 0;
  for (double v : u0) umax = std::max(umax, std::abs(v));
  for (double v : a.y) ymax = std::max(ymax, std::abs(v));
  CHECK(ymax < umax + 4 * 0.05);

  // noiseless: ||y||_inf <= ||u0||_inf exactly
  const HeatChannel quiet = ch.with_sigma(0.0);
  RngStream r3(5, {9});
  const HeatObservation q = quiet.transmit(s, r3);
  double qmax = 0;
  for (double v : q.y) qmax = std::max(qmax, std::abs(v));
  CHECK(qmax <= umax);
}

TEST_CASE("heat smoothing reduces the peak (Courant-stable blur)") {
  const HeatGrid grid(0.2, 0.005, 0.05, 200, 100);
  const ChannelLayout L = make_heat_layout(grid, 7, 0.2, 0.0, SensorMode::AllGridPoints);
  const HeatChannel ch(grid, L);
  const RealVec u0 = ch.synth(RealVec{1, 1, -1, -1, 1, -1, 1});
  const RealVec uT = ch.solve(u0);
  double m0 = 0, mT = 0;
  for (double v : u0) m0 = std::max(m0, std::abs(v));
  for (double v : uT) mT = std::max(mT, std::abs(v));
  CHECK(mT < m0);
}

TEST_CASE("nlse channel synthesizes a real field and transmits deterministically") {
  const NlseGrid grid(1, 1.0, 256, 32.0, 0.025, 20);
  const ChannelLayout L = make_nlse_layout(grid, 15, std::sqrt(0.1), 0.1, SensorMode::AllGridPoints);
  const NlseChannel ch(grid, L);
  CHECK(ch.word_length() == 15);
  CHECK(ch.sensor_count() == 256);

  BipolarWord s(15, 1);
  s[3] = s[7] = s[8] = -1;
  const CplxVec U0 = ch.synth(to_real(s));
  for (const auto& v : U0) CHECK(v.imag() == 0.0);
  for (size_t i = 0; i < 15; ++i)
    CHECK(sign_pos(U0[L.center_indices[i]].real()) == doctest::Approx(double(s[i])));

  RngStream r1(3, {0}), r2(3, {0});
  const NlseObservation a = ch.transmit(s, r1);
  const NlseObservation b = ch.transmit(s, r2);
  CHECK(a.y == b.y);
}

TEST_CASE("channel loss gradient agrees with the solver-level gradient") {
  const HeatGrid grid(0.2, 0.005, 0.05, 64, 12);
  const ChannelLayout L = make_heat_layout(grid, 5, 0.15, 0.0, SensorMode::AllGridPoints);
  const HeatChannel ch(grid, L);
  RngStream rng(31, {0});
  RealVec s(5), y(ch.sensor_count());
  for (auto& v : s) v = rng.gaussian();
  for (auto& v : y) v = rng.gaussian();

  const auto lg = ch.loss_and_center_gradient(s, y);
  const RealVec z = fdm_input_gradient(ch.synth(s), y, L.sensor_indices, grid);
  for (size_t i = 0; i < 5; ++i) CHECK(lg.center_grad[i] == doctest::Approx(z[L.center_indices[i]]));

  const RealVec uT = ch.solve(ch.synth(s));
  double loss = 0;
  for (size_t k = 0; k < y.size(); ++k) {
    const double d = uT[L.sensor_indices[k]] - y[k];
    loss += d * d;
  }
  CHECK(lg.loss == doctest::Approx(loss));
}
