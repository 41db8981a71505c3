#include "pdecode/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pdecode {

double pulse(double x, double t0) {
  if (!(t0 > 0)) throw std::invalid_argument("pulse: t0 must be positive");
  return std::exp(-x * x / (2.0 * t0 * t0));
}

void ChannelLayout::validate(double domain_length) const {
  if (!(t0 > 0)) throw std::invalid_argument("layout: t0 must be positive");
  if (noise_sigma < 0) throw std::invalid_argument("layout: noise_sigma must be nonnegative");
  if (pulse_centers.empty()) throw std::invalid_argument("layout: no pulse centers");
  const double clearance = 4.0 * t0;
  for (double p : pulse_centers) {
    if (!(p >= clearance) || !(p <= domain_length - clearance))
      throw std::invalid_argument("layout: pulse center " + std::to_string(p) +
                                  " closer than 4*t0 to a boundary");
  }
  for (size_t i = 1; i < pulse_centers.size(); ++i) {
    const double gap = pulse_centers[i] - pulse_centers[i - 1];
    if (!(gap >= min_spacing))
      throw std::invalid_argument("layout: pulse spacing " + std::to_string(gap) +
                                  " below the minimum " + std::to_string(min_spacing));
  }
  if (sensor_indices.empty()) throw std::invalid_argument("layout: no sensors");
}

void ChannelLayout::bind_sensor_slots() {
  center_sensor_slots.assign(center_indices.size(), npos);
  for (size_t i = 0; i < center_indices.size(); ++i) {
    for (size_t k = 0; k < sensor_indices.size(); ++k) {
      if (sensor_indices[k] == center_indices[i]) {
        center_sensor_slots[i] = k;
        break;
      }
    }
  }
}

namespace {

// even placement (or explicit spacing, centered), snapped to the grid
// x(index) = origin + index * step; valid indices [lo, hi]
ChannelLayout build_layout(size_t n_pulses, double t0, double sigma, SensorMode sensors,
                           double spacing, double min_spacing_factor, double domain_length,
                           double step, size_t lo, size_t hi, double origin) {
  if (n_pulses == 0) throw std::invalid_argument("layout: n_pulses must be positive");
  ChannelLayout L;
  L.t0 = t0;
  L.noise_sigma = sigma;
  L.min_spacing = min_spacing_factor * t0;

  const double gap = spacing > 0 ? spacing : domain_length / static_cast<double>(n_pulses + 1);
  const double first = spacing > 0
                           ? 0.5 * (domain_length - gap * static_cast<double>(n_pulses - 1))
                           : gap;
  for (size_t i = 0; i < n_pulses; ++i) {
    const double p = first + gap * static_cast<double>(i);
    const long long idx = std::llround((p - origin) / step);
    if (idx < static_cast<long long>(lo) || idx > static_cast<long long>(hi))
      throw std::invalid_argument("layout: pulse center " + std::to_string(p) + " off the grid");
    L.center_indices.push_back(static_cast<size_t>(idx) - lo);
    L.pulse_centers.push_back(origin + static_cast<double>(idx) * step);
  }
  if (sensors == SensorMode::AllGridPoints) {
    for (size_t g = lo; g <= hi; ++g) {
      L.sensor_indices.push_back(g - lo);
      L.sensor_positions.push_back(origin + static_cast<double>(g) * step);
    }
  } else {
    L.sensor_indices = L.center_indices;
    L.sensor_positions = L.pulse_centers;
  }
  L.validate(domain_length);
  L.bind_sensor_slots();
  return L;
}

} // namespace

ChannelLayout make_heat_layout(const HeatGrid& grid, size_t n_pulses, double t0, double sigma,
                               SensorMode sensors, double spacing, double min_spacing_factor) {
  // interior grid points g = 1 .. n_x - 1 at x = g * ell; state index g - 1
  return build_layout(n_pulses, t0, sigma, sensors, spacing, min_spacing_factor, grid.length(),
                      grid.ell, 1, grid.n_x - 1, 0.0);
}

ChannelLayout make_nlse_layout(const NlseGrid& grid, size_t n_pulses, double t0, double sigma,
                               SensorMode sensors, double spacing, double min_spacing_factor) {
  return build_layout(n_pulses, t0, sigma, sensors, spacing, min_spacing_factor, grid.tau_span,
                      grid.dtau(), 0, grid.n_tau - 1, 0.0);
}

namespace {

RealVec build_pulse_matrix(const ChannelLayout& layout, double step, double origin, size_t rows,
                           size_t row_offset) {
  const size_t n = layout.word_length();
  RealVec M(rows * n);
  for (size_t k = 0; k < rows; ++k) {
    const double x = origin + static_cast<double>(k + row_offset) * step;
    for (size_t i = 0; i < n; ++i) M[k * n + i] = pulse(x - layout.pulse_centers[i], layout.t0);
  }
  return M;
}

RealVec synth_from_matrix(const RealVec& M, const RealVec& s, size_t rows) {
  const size_t n = s.size();
  RealVec out(rows);
  for (size_t k = 0; k < rows; ++k) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += s[i] * M[k * n + i];
    out[k] = acc;
  }
  return out;
}

RealVec to_real(const BipolarWord& s) {
  RealVec x(s.size());
  for (size_t i = 0; i < s.size(); ++i) x[i] = static_cast<double>(s[i]);
  return x;
}

} // namespace

RealVec synth_waveform(const RealVec& s, const ChannelLayout& layout, const HeatGrid& grid) {
  if (s.size() != layout.word_length()) throw std::invalid_argument("synth_waveform: length mismatch");
  RealVec u(grid.state_size());
  for (size_t k = 0; k < u.size(); ++k) {
    const double x = static_cast<double>(k + 1) * grid.ell;
    double acc = 0.0;
    for (size_t i = 0; i < s.size(); ++i) acc += s[i] * pulse(x - layout.pulse_centers[i], layout.t0);
    u[k] = acc;
  }
  return u;
}

CplxVec synth_waveform(const RealVec& s, const ChannelLayout& layout, const NlseGrid& grid) {
  if (s.size() != layout.word_length()) throw std::invalid_argument("synth_waveform: length mismatch");
  CplxVec U(grid.n_tau);
  for (size_t k = 0; k < U.size(); ++k) {
    const double tau = static_cast<double>(k) * grid.dtau();
    double acc = 0.0;
    for (size_t i = 0; i < s.size(); ++i) acc += s[i] * pulse(tau - layout.pulse_centers[i], layout.t0);
    U[k] = acc;
  }
  return U;
}

RealVec sample_sensors(const RealVec& u, const ChannelLayout& layout) {
  RealVec y(layout.sensor_indices.size());
  for (size_t k = 0; k < y.size(); ++k) {
    const size_t idx = layout.sensor_indices[k];
    if (idx >= u.size()) throw std::invalid_argument("sample_sensors: index out of range");
    y[k] = u[idx];
  }
  return y;
}

CplxVec sample_sensors(const CplxVec& u, const ChannelLayout& layout) {
  CplxVec y(layout.sensor_indices.size());
  for (size_t k = 0; k < y.size(); ++k) {
    const size_t idx = layout.sensor_indices[k];
    if (idx >= u.size()) throw std::invalid_argument("sample_sensors: index out of range");
    y[k] = u[idx];
  }
  return y;
}

RealVec add_noise(const RealVec& r, double sigma, RngStream& rng) {
  if (sigma < 0) throw std::invalid_argument("add_noise: negative sigma");
  RealVec y = r;
  if (sigma == 0) return y;
  for (auto& v : y) v += sigma * rng.gaussian();
  return y;
}

CplxVec add_noise(const CplxVec& r, double sigma, RngStream& rng) {
  if (sigma < 0) throw std::invalid_argument("add_noise: negative sigma");
  CplxVec y = r;
  if (sigma == 0) return y;
  for (auto& v : y) {
    const double re = sigma * rng.gaussian();
    const double im = sigma * rng.gaussian();
    v += std::complex<double>(re, im);
  }
  return y;
}

HeatChannel::HeatChannel(const HeatGrid& grid, ChannelLayout layout)
    : grid_(grid), layout_(std::move(layout)) {
  layout_.validate(grid_.length());
  for (size_t idx : layout_.sensor_indices)
    if (idx >= grid_.state_size()) throw std::invalid_argument("layout: sensor index off the grid");
  for (size_t idx : layout_.center_indices)
    if (idx >= grid_.state_size()) throw std::invalid_argument("layout: pulse center off the grid");
  pulse_matrix_ = build_pulse_matrix(layout_, grid_.ell, 0.0, grid_.state_size(), 1);
}

HeatChannel HeatChannel::with_sigma(double sigma) const {
  ChannelLayout L = layout_;
  L.noise_sigma = sigma;
  return HeatChannel(grid_, std::move(L));
}

RealVec HeatChannel::synth(const RealVec& s) const {
  if (s.size() != word_length()) throw std::invalid_argument("synth: length mismatch");
  return synth_from_matrix(pulse_matrix_, s, grid_.state_size());
}

RealVec HeatChannel::forward(const BipolarWord& s) const { return sample(solve(synth(to_real(s)))); }

HeatChannel::LossGrad HeatChannel::loss_and_center_gradient(const RealVec& s, const RealVec& y) const {
  if (y.size() != sensor_count()) throw std::invalid_argument("loss: observation length mismatch");
  const RealVec u0 = synth(s);
  const RealVec uT = solve(u0);
  double loss = 0.0;
  RealVec adj(u0.size(), 0.0);
  for (size_t k = 0; k < layout_.sensor_indices.size(); ++k) {
    const double resid = uT[layout_.sensor_indices[k]] - y[k];
    loss += resid * resid;
    adj[layout_.sensor_indices[k]] += 2.0 * resid;
  }
  const RealVec z = fdm_solve(adj, grid_); // symmetric operator: adjoint pass = forward pass
  RealVec g(word_length());
  for (size_t i = 0; i < g.size(); ++i) g[i] = z[layout_.center_indices[i]];
  return {loss, std::move(g)};
}

HeatChannel::Observation HeatChannel::transmit(const BipolarWord& s, RngStream& rng,
                                               std::uint64_t seed_tag) const {
  if (s.size() != word_length()) throw std::invalid_argument("transmit: word length mismatch");
  Observation obs;
  obs.y = add_noise(sample(solve(synth(to_real(s)))), layout_.noise_sigma, rng);
  obs.true_word = s;
  obs.rng_seed = seed_tag;
  return obs;
}

NlseChannel::NlseChannel(const NlseGrid& grid, ChannelLayout layout)
    : layout_(std::move(layout)), solver_(grid) {
  layout_.validate(grid.tau_span);
  for (size_t idx : layout_.sensor_indices)
    if (idx >= grid.n_tau) throw std::invalid_argument("layout: sensor index off the grid");
  for (size_t idx : layout_.center_indices)
    if (idx >= grid.n_tau) throw std::invalid_argument("layout: pulse center off the grid");
  pulse_matrix_ = build_pulse_matrix(layout_, grid.dtau(), 0.0, grid.n_tau, 0);
}

NlseChannel NlseChannel::with_sigma(double sigma) const {
  ChannelLayout L = layout_;
  L.noise_sigma = sigma;
  return NlseChannel(solver_.grid(), std::move(L));
}

CplxVec NlseChannel::synth(const RealVec& s) const {
  if (s.size() != word_length()) throw std::invalid_argument("synth: length mismatch");
  const RealVec u = synth_from_matrix(pulse_matrix_, s, solver_.grid().n_tau);
  CplxVec U(u.size());
  for (size_t k = 0; k < u.size(); ++k) U[k] = u[k];
  return U;
}

CplxVec NlseChannel::forward(const BipolarWord& s) const { return sample(solve(synth(to_real(s)))); }

NlseChannel::LossGrad NlseChannel::loss_and_center_gradient(const RealVec& s, const CplxVec& y) const {
  if (y.size() != sensor_count()) throw std::invalid_argument("loss: observation length mismatch");
  const CplxVec U0 = synth(s);
  std::vector<ComplexField> tape;
  const ComplexField uf = solver_.solve_with_tape(U0, tape);
  double loss = 0.0;
  ComplexField gf(uf.size(), {0.0, 0.0});
  for (size_t k = 0; k < layout_.sensor_indices.size(); ++k) {
    const std::complex<double> resid = uf[layout_.sensor_indices[k]] - y[k];
    loss += std::norm(resid);
    gf[layout_.sensor_indices[k]] += 2.0 * resid;
  }
  const ComplexField z = solver_.backward(std::move(gf), tape);
  RealVec g(word_length());
  for (size_t i = 0; i < g.size(); ++i) g[i] = z[layout_.center_indices[i]].real();
  return {loss, std::move(g)};
}

NlseChannel::Observation NlseChannel::transmit(const BipolarWord& s, RngStream& rng,
                                               std::uint64_t seed_tag) const {
  if (s.size() != word_length()) throw std::invalid_argument("transmit: word length mismatch");
  Observation obs;
  obs.y = add_noise(sample(solve(synth(to_real(s)))), layout_.noise_sigma, rng);
  obs.true_word = s;
  obs.rng_seed = seed_tag;
  return obs;
}

} // namespace pdecode
