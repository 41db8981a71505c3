#include "pdecode/decoder.hpp"

namespace pdecode {

RealVec project_gradient(const RealVec& z, const std::vector<size_t>& center_indices) {
  RealVec g(center_indices.size());
  for (size_t i = 0; i < g.size(); ++i) {
    if (center_indices[i] >= z.size())
      throw std::invalid_argument("project_gradient: index out of range");
    g[i] = z[center_indices[i]];
  }
  return g;
}

RealVec project_gradient(const CplxVec& z, const std::vector<size_t>& center_indices) {
  RealVec g(center_indices.size());
  for (size_t i = 0; i < g.size(); ++i) {
    if (center_indices[i] >= z.size())
      throw std::invalid_argument("project_gradient: index out of range");
    g[i] = z[center_indices[i]].real();
  }
  return g;
}

namespace {

template <typename V>
BipolarWord peak_detect_impl(const V& y, const ChannelLayout& layout) {
  BipolarWord w(layout.word_length());
  for (size_t i = 0; i < w.size(); ++i) {
    const size_t slot = layout.center_sensor_slots[i];
    if (slot == ChannelLayout::npos)
      throw std::invalid_argument("peak_detect: pulse center " + std::to_string(i + 1) +
                                  " has no sensor");
    if (slot >= y.size()) throw std::invalid_argument("peak_detect: observation length mismatch");
    double v;
    if constexpr (std::is_same_v<typename V::value_type, double>) v = y[slot];
    else v = y[slot].real();
    w[i] = v < 0.0 ? -1 : 1;
  }
  return w;
}

} // namespace

BipolarWord peak_detect(const RealVec& y, const ChannelLayout& layout) {
  return peak_detect_impl(y, layout);
}

BipolarWord peak_detect(const CplxVec& y, const ChannelLayout& layout) {
  return peak_detect_impl(y, layout);
}

BipolarWord bp_detect(const CplxVec& y, const NlseChannel& channel) {
  const size_t n_tau = channel.grid().n_tau;
  if (channel.sensor_count() != n_tau || y.size() != n_tau)
    throw std::invalid_argument("bp_detect: requires the full field (sensors at every grid point)");
  // sensors cover every grid point, so the observation ordered by sensor
  // index is the field itself
  ComplexField field(n_tau);
  for (size_t k = 0; k < n_tau; ++k) field[channel.layout().sensor_indices[k]] = y[k];
  const ComplexField back = channel.solver().reverse_propagate(field);
  BipolarWord w(channel.word_length());
  for (size_t i = 0; i < w.size(); ++i)
    w[i] = back[channel.layout().center_indices[i]].real() < 0.0 ? -1 : 1;
  return w;
}

} // namespace pdecode
