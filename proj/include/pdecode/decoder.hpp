#ifndef PDECODE_DECODER_HPP
#define PDECODE_DECODER_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "pdecode/channel.hpp"
#include "pdecode/gf2.hpp"
#include "pdecode/potential.hpp"
#include "pdecode/rng.hpp"
#include "pdecode/types.hpp"

namespace pdecode {

struct GfDecoderParams {
  double eta = 0.1;   // step size
  double gamma = 0.1; // potential coupling
  PotentialParams potential;
  size_t iterations = 20;
  double init_sigma = 0.5;
  enum class Init { Gaussian, PeakWarmStart } init = Init::Gaussian;
  bool record_trace = false;
  double divergence_limit = 1e3;

  void validate() const {
    if (!(eta > 0)) throw std::invalid_argument("decoder: eta must be positive");
    if (gamma < 0) throw std::invalid_argument("decoder: gamma must be nonnegative");
    if (iterations < 1) throw std::invalid_argument("decoder: iterations must be at least 1");
    if (init_sigma < 0) throw std::invalid_argument("decoder: init_sigma must be nonnegative");
    potential.validate();
  }
};

struct TracePoint {
  double squared_error;
  double potential_energy;
};

struct DecodeResult {
  BipolarWord estimate;  // entrywise sign of final_state, sgn(0) = +1
  RealVec final_state;
  std::vector<TracePoint> trajectory; // filled when record_trace; entry k is state s^(k)
  bool is_codeword = false;
  bool diverged = false; // non-finite state or |s_j| > divergence_limit; never clipped
};

// Algorithm step 6: gather the loss gradient at the pulse-center grid
// indices. For a complex field gradient the real part is taken (the pulse
// amplitudes are real).
RealVec project_gradient(const RealVec& z, const std::vector<size_t>& center_indices);
RealVec project_gradient(const CplxVec& z, const std::vector<size_t>& center_indices);

// Peak detection baseline: sign of y at each pulse-center sensor (real part
// for complex observations), sgn(0) = +1. Throws when a pulse center is not
// covered by a sensor.
BipolarWord peak_detect(const RealVec& y, const ChannelLayout& layout);
BipolarWord peak_detect(const CplxVec& y, const ChannelLayout& layout);

// Digital backpropagation baseline (NLSE only): exact reverse propagation of
// the received full field, then peak detection on the real part. Requires
// sensors at every tau grid point.
BipolarWord bp_detect(const CplxVec& y, const NlseChannel& channel);

// Gradient-flow decoding: U iterations of
//   s <- s - eta * (g + gamma * grad h(s)),
// where g is the solver input gradient of ||y - f~(s)||^2 gathered at the
// pulse centers. Returns sgn(s^(U)). A forced initial state (tests, warm
// restarts) overrides the Init mode.
template <class Channel>
DecodeResult gf_decode(const typename Channel::ObsVec& y, const Channel& channel,
                       const ParityCheckMatrix& H, const GfDecoderParams& params,
                       RngStream& init_rng, const std::optional<RealVec>& forced_init = {}) {
  params.validate();
  const size_t n = channel.word_length();
  if (H.cols() != n) throw std::invalid_argument("gf_decode: code/channel length mismatch");

  RealVec s;
  if (forced_init) {
    if (forced_init->size() != n) throw std::invalid_argument("gf_decode: init length mismatch");
    s = *forced_init;
  } else if (params.init == GfDecoderParams::Init::PeakWarmStart) {
    const BipolarWord w = peak_detect(y, channel.layout());
    s.resize(n);
    for (size_t j = 0; j < n; ++j) s[j] = static_cast<double>(w[j]);
  } else {
    s.resize(n);
    for (size_t j = 0; j < n; ++j) s[j] = params.init_sigma * init_rng.gaussian();
  }

  DecodeResult result;
  for (size_t k = 0; k < params.iterations; ++k) {
    const auto lg = channel.loss_and_center_gradient(s, y);
    const RealVec hgrad = potential_gradient(s, H, params.potential);
    if (params.record_trace)
      result.trajectory.push_back({lg.loss, potential_energy(s, H, params.potential)});
    for (size_t j = 0; j < n; ++j) s[j] -= params.eta * (lg.center_grad[j] + params.gamma * hgrad[j]);

    bool bad = false;
    for (double v : s)
      if (!std::isfinite(v) || std::abs(v) > params.divergence_limit) bad = true;
    if (bad) {
      result.diverged = true;
      break;
    }
  }
  if (params.record_trace && !result.diverged) {
    const auto lg = channel.loss_and_center_gradient(s, y);
    result.trajectory.push_back({lg.loss, potential_energy(s, H, params.potential)});
  }

  result.final_state = s;
  result.estimate = hard_decision(s);
  if (!result.diverged) {
    const BitVec syn = syndrome(H, binary_map(result.estimate));
    result.is_codeword = true;
    for (auto b : syn)
      if (b) result.is_codeword = false;
  }
  return result;
}

} // namespace pdecode

#endif
