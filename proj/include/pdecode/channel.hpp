#ifndef PDECODE_CHANNEL_HPP
#define PDECODE_CHANNEL_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pdecode/heat.hpp"
#include "pdecode/nlse.hpp"
#include "pdecode/rng.hpp"
#include "pdecode/types.hpp"

namespace pdecode {

// Gaussian pulse exp(-x^2 / (2 t0^2)); t0 is the half-width.
double pulse(double x, double t0);

enum class SensorMode { AllGridPoints, PulseCenters };

// Pulse and sensor geometry on a 1-D grid. Positions are stored snapped to
// grid points; indices are 0-based into the solver state vector.
// Invariants (enforced by the factories and validate()):
//   - pulse centers keep clearance >= 4 t0 from both domain boundaries,
//   - center spacing >= min_spacing (default 6 t0),
//   - sensors lie on grid points (by construction).
struct ChannelLayout {
  double t0 = 0.0;
  double noise_sigma = 0.0;
  std::vector<double> pulse_centers;
  std::vector<size_t> center_indices;
  std::vector<double> sensor_positions;
  std::vector<size_t> sensor_indices;
  double min_spacing = 0.0;

  // slot of pulse center i within the sensor list, or npos when the center
  // is not observed (peak detection then fails loudly)
  static constexpr size_t npos = static_cast<size_t>(-1);
  std::vector<size_t> center_sensor_slots;

  size_t word_length() const { return pulse_centers.size(); }
  void validate(double domain_length) const;
  void bind_sensor_slots();
};

// Evenly spaced centers with symmetric margins, snapped to grid points.
// An explicit spacing centers the pulse train in the domain; spacing <= 0
// selects the default L / (n + 1) placement.
ChannelLayout make_heat_layout(const HeatGrid& grid, size_t n_pulses, double t0, double sigma,
                               SensorMode sensors, double spacing = 0.0,
                               double min_spacing_factor = 6.0);
ChannelLayout make_nlse_layout(const NlseGrid& grid, size_t n_pulses, double t0, double sigma,
                               SensorMode sensors, double spacing = 0.0,
                               double min_spacing_factor = 6.0);

// Samples of b(x; s) = sum_i s_i pulse(x - p_i) at the interior grid points
// (heat) or the tau grid (NLSE). s may be any real vector; bipolar words are
// the transmitted special case.
RealVec synth_waveform(const RealVec& s, const ChannelLayout& layout, const HeatGrid& grid);
CplxVec synth_waveform(const RealVec& s, const ChannelLayout& layout, const NlseGrid& grid);

// Gather the field at the sensor indices.
RealVec sample_sensors(const RealVec& u, const ChannelLayout& layout);
CplxVec sample_sensors(const CplxVec& u, const ChannelLayout& layout);

// i.i.d. N(0, sigma^2) per real component; complex entries get independent
// real and imaginary noise (real drawn first).
RealVec add_noise(const RealVec& r, double sigma, RngStream& rng);
CplxVec add_noise(const CplxVec& r, double sigma, RngStream& rng);

template <typename V>
struct ObservationT {
  V y;
  std::optional<BipolarWord> true_word;
  std::uint64_t rng_seed = 0; // caller-supplied tag identifying the noise stream
};
using HeatObservation = ObservationT<RealVec>;
using NlseObservation = ObservationT<CplxVec>;

// Heat channel: pulse synthesis matrix precomputed against the grid, forward
// solve by explicit FDM, exact adjoint input gradient. Immutable after
// construction; safe to share across Monte-Carlo threads.
class HeatChannel {
 public:
  using ObsVec = RealVec;
  using Observation = HeatObservation;

  HeatChannel(const HeatGrid& grid, ChannelLayout layout);

  const HeatGrid& grid() const { return grid_; }
  const ChannelLayout& layout() const { return layout_; }
  size_t word_length() const { return layout_.word_length(); }
  size_t sensor_count() const { return layout_.sensor_indices.size(); }

  HeatChannel with_sigma(double sigma) const;

  RealVec synth(const RealVec& s) const;
  RealVec solve(const RealVec& u0) const { return fdm_solve(u0, grid_); }
  RealVec sample(const RealVec& u) const { return sample_sensors(u, layout_); }
  RealVec forward(const BipolarWord& s) const;

  // loss ||y - S solve(synth(s))||^2 and its gradient gathered at the pulse
  // centers (one forward + one adjoint solve)
  struct LossGrad {
    double loss;
    RealVec center_grad;
  };
  LossGrad loss_and_center_gradient(const RealVec& s, const RealVec& y) const;

  Observation transmit(const BipolarWord& s, RngStream& rng, std::uint64_t seed_tag = 0) const;

 private:
  HeatGrid grid_;
  ChannelLayout layout_;
  RealVec pulse_matrix_; // state_size x n, row-major
};

// NLSE channel: real bipolar amplitudes on Gaussian pulses over the tau
// window (field initially real), SSFM forward solve, reverse-mode gradient.
class NlseChannel {
 public:
  using ObsVec = CplxVec;
  using Observation = NlseObservation;

  NlseChannel(const NlseGrid& grid, ChannelLayout layout);

  const NlseGrid& grid() const { return solver_.grid(); }
  const SsfmSolver& solver() const { return solver_; }
  const ChannelLayout& layout() const { return layout_; }
  size_t word_length() const { return layout_.word_length(); }
  size_t sensor_count() const { return layout_.sensor_indices.size(); }

  NlseChannel with_sigma(double sigma) const;

  CplxVec synth(const RealVec& s) const;
  CplxVec solve(const CplxVec& U0) const { return solver_.solve(U0); }
  CplxVec sample(const CplxVec& u) const { return sample_sensors(u, layout_); }
  CplxVec forward(const BipolarWord& s) const;

  struct LossGrad {
    double loss;
    RealVec center_grad; // real parts of the input gradient at the centers
  };
  LossGrad loss_and_center_gradient(const RealVec& s, const CplxVec& y) const;

  Observation transmit(const BipolarWord& s, RngStream& rng, std::uint64_t seed_tag = 0) const;

 private:
  ChannelLayout layout_;
  SsfmSolver solver_;
  RealVec pulse_matrix_; // n_tau x n, row-major
};

} // namespace pdecode

#endif
