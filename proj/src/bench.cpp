#include "pdecode/bench.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace pdecode {

using nlohmann::json;

namespace {

constexpr std::uint64_t kChanSalt = 0x4348414eULL; // channel stream (word choice + noise)
constexpr std::uint64_t kInitSalt = 0x494e4954ULL; // gf initial-state stream

std::uint64_t sigma_bits(double sigma) { return std::bit_cast<std::uint64_t>(sigma); }

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

[[noreturn]] void config_error(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

void require_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) config_error(std::string("unknown key '") + it.key() + "' in " + where);
  }
}

double get_num(const json& obj, const char* key, std::optional<double> dflt = {}) {
  if (!obj.contains(key)) {
    if (dflt) return *dflt;
    config_error(std::string("missing field '") + key + "'");
  }
  if (!obj[key].is_number()) config_error(std::string("field '") + key + "' must be a number");
  return obj[key].get<double>();
}

std::uint64_t get_uint(const json& obj, const char* key, std::optional<std::uint64_t> dflt = {}) {
  if (!obj.contains(key)) {
    if (dflt) return *dflt;
    config_error(std::string("missing field '") + key + "'");
  }
  if (!obj[key].is_number_unsigned()) config_error(std::string("field '") + key + "' must be a nonnegative integer");
  return obj[key].get<std::uint64_t>();
}

} // namespace

const char* decoder_name(DecoderId id) {
  switch (id) {
    case DecoderId::Gf: return "gf";
    case DecoderId::Peak: return "peak";
    case DecoderId::Bp: return "bp";
    case DecoderId::Ml: return "ml";
  }
  return "?";
}

ExperimentConfig parse_experiment_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error("top level must be an object");
  require_keys(doc, "config",
               {"pde", "code", "grid", "layout", "decoder", "noise_sigmas", "trials", "decoders",
                "seed", "codebook_cap_log2"});

  ExperimentConfig cfg;

  const std::string pde = doc.value("pde", "");
  if (pde == "heat") cfg.pde = Pde::Heat;
  else if (pde == "nlse") cfg.pde = Pde::Nlse;
  else config_error("field 'pde' must be \"heat\" or \"nlse\"");

  if (!doc.contains("code") || !doc["code"].is_string()) config_error("missing field 'code' (parity-check file path)");
  cfg.code_path = doc["code"].get<std::string>();

  if (!doc.contains("grid") || !doc["grid"].is_object()) config_error("missing object 'grid'");
  const json& g = doc["grid"];
  if (cfg.pde == Pde::Heat) {
    require_keys(g, "grid", {"lambda", "h", "ell", "nx", "nt"});
    cfg.grid = HeatGrid(get_num(g, "lambda"), get_num(g, "h"), get_num(g, "ell"),
                        static_cast<size_t>(get_uint(g, "nx")), static_cast<size_t>(get_uint(g, "nt")));
  } else {
    require_keys(g, "grid", {"s_sign", "n_sq", "n_tau", "tau_span", "ell_xi", "n_steps"});
    const double s = get_num(g, "s_sign", 1.0);
    if (s != 1.0 && s != -1.0) config_error("field 's_sign' must be +1 or -1");
    cfg.grid = NlseGrid(static_cast<int>(s), get_num(g, "n_sq", 1.0),
                        static_cast<size_t>(get_uint(g, "n_tau")), get_num(g, "tau_span"),
                        get_num(g, "ell_xi"), static_cast<size_t>(get_uint(g, "n_steps")));
  }

  if (!doc.contains("layout") || !doc["layout"].is_object()) config_error("missing object 'layout'");
  const json& lay = doc["layout"];
  require_keys(lay, "layout", {"t0", "sensors", "spacing", "min_spacing_factor", "dispersion_length"});
  if (lay.contains("dispersion_length")) {
    if (cfg.pde != Pde::Nlse) config_error("'dispersion_length' applies to the nlse channel only");
    cfg.dispersion_length = get_num(lay, "dispersion_length");
    if (!(*cfg.dispersion_length > 0)) config_error("'dispersion_length' must be positive");
  }
  if (lay.contains("t0")) cfg.t0 = get_num(lay, "t0");
  else if (cfg.dispersion_length) cfg.t0 = std::sqrt(*cfg.dispersion_length);
  else config_error("missing field 't0' (or 'dispersion_length' for nlse)");
  if (!(cfg.t0 > 0)) config_error("'t0' must be positive");
  cfg.spacing = get_num(lay, "spacing", 0.0);
  cfg.min_spacing_factor = get_num(lay, "min_spacing_factor", 6.0);
  const std::string sens = lay.value("sensors", "all");
  if (sens == "all") cfg.sensors = SensorMode::AllGridPoints;
  else if (sens == "pulse_centers") cfg.sensors = SensorMode::PulseCenters;
  else config_error("field 'sensors' must be \"all\" or \"pulse_centers\"");

  const json dec = doc.value("decoder", json::object());
  require_keys(dec, "decoder",
               {"eta", "gamma", "alpha", "beta", "iterations", "init_sigma", "init",
                "epsilon_clamp", "divergence_limit"});
  cfg.decoder.eta = get_num(dec, "eta", 0.1);
  cfg.decoder.gamma = get_num(dec, "gamma", 0.1);
  cfg.decoder.potential.alpha = get_num(dec, "alpha", 1.0);
  cfg.decoder.potential.beta = get_num(dec, "beta", 1.0);
  cfg.decoder.potential.epsilon_clamp = get_num(dec, "epsilon_clamp", 1e-8);
  cfg.decoder.iterations = static_cast<size_t>(get_uint(dec, "iterations", 20));
  cfg.decoder.init_sigma = get_num(dec, "init_sigma", 0.5);
  cfg.decoder.divergence_limit = get_num(dec, "divergence_limit", 1e3);
  const std::string init = dec.value("init", "gaussian");
  if (init == "gaussian") cfg.decoder.init = GfDecoderParams::Init::Gaussian;
  else if (init == "peak") cfg.decoder.init = GfDecoderParams::Init::PeakWarmStart;
  else config_error("field 'init' must be \"gaussian\" or \"peak\"");
  cfg.decoder.validate();

  if (!doc.contains("noise_sigmas") || !doc["noise_sigmas"].is_array() || doc["noise_sigmas"].empty())
    config_error("'noise_sigmas' must be a nonempty array");
  for (const auto& v : doc["noise_sigmas"]) {
    if (!v.is_number()) config_error("'noise_sigmas' entries must be numbers");
    const double s = v.get<double>();
    if (s < 0) config_error("'noise_sigmas' entries must be nonnegative");
    cfg.noise_sigmas.push_back(s);
  }

  cfg.trials = get_uint(doc, "trials", 1000);
  if (cfg.trials < 1) config_error("'trials' must be at least 1");

  if (doc.contains("decoders")) {
    if (!doc["decoders"].is_array() || doc["decoders"].empty())
      config_error("'decoders' must be a nonempty array");
    cfg.decoders.clear();
    for (const auto& v : doc["decoders"]) {
      const std::string name = v.is_string() ? v.get<std::string>() : "";
      if (name == "gf") cfg.decoders.push_back(DecoderId::Gf);
      else if (name == "peak") cfg.decoders.push_back(DecoderId::Peak);
      else if (name == "bp") cfg.decoders.push_back(DecoderId::Bp);
      else if (name == "ml") cfg.decoders.push_back(DecoderId::Ml);
      else config_error("unknown decoder '" + name + "'");
    }
  }
  for (DecoderId d : cfg.decoders)
    if (d == DecoderId::Bp && cfg.pde != Pde::Nlse)
      config_error("decoder 'bp' requires the nlse channel");
  if (cfg.pde == Pde::Nlse && cfg.sensors != SensorMode::AllGridPoints)
    for (DecoderId d : cfg.decoders)
      if (d == DecoderId::Bp) config_error("decoder 'bp' requires sensors \"all\"");

  cfg.seed = get_uint(doc, "seed", 1);
  const std::uint64_t cap_log2 = get_uint(doc, "codebook_cap_log2", 20);
  if (cap_log2 > 62) config_error("'codebook_cap_log2' too large");
  cfg.codebook_cap = 1ull << cap_log2;

  return cfg;
}

namespace {

json grid_json(const ExperimentConfig& cfg) {
  json g;
  if (cfg.pde == Pde::Heat) {
    const auto& hg = std::get<HeatGrid>(cfg.grid);
    g["lambda"] = hg.lambda;
    g["h"] = hg.h;
    g["ell"] = hg.ell;
    g["nx"] = hg.n_x;
    g["nt"] = hg.n_t;
    g["courant"] = hg.courant();
  } else {
    const auto& ng = std::get<NlseGrid>(cfg.grid);
    g["s_sign"] = ng.s_sign;
    g["n_sq"] = ng.n_sq;
    g["n_tau"] = ng.n_tau;
    g["tau_span"] = ng.tau_span;
    g["ell_xi"] = ng.ell_xi;
    g["n_steps"] = ng.n_steps;
  }
  return g;
}

template <class Channel>
json layout_json(const ExperimentConfig& cfg, const Channel& ch) {
  json l;
  l["t0"] = ch.layout().t0;
  l["sensors"] = cfg.sensors == SensorMode::AllGridPoints ? "all" : "pulse_centers";
  l["sensor_count"] = ch.layout().sensor_indices.size();
  l["spacing"] = cfg.spacing;
  l["min_spacing_factor"] = cfg.min_spacing_factor;
  l["pulse_centers"] = ch.layout().pulse_centers;
  if (cfg.dispersion_length) l["dispersion_length"] = *cfg.dispersion_length;
  return l;
}

std::string decoder_init_name(const GfDecoderParams& p) {
  return p.init == GfDecoderParams::Init::Gaussian ? "gaussian" : "peak";
}

} // namespace

Experiment build_experiment(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  ParityCheckMatrix H = load_parity_check_file(cfg.code_path);
  const size_t n = H.cols();

  bool want_ml = false;
  for (DecoderId d : cfg.decoders)
    if (d == DecoderId::Ml) want_ml = true;
  if (want_ml) {
    const size_t k = n - H.rank();
    if (k >= 63 || (1ull << k) > cfg.codebook_cap)
      config_error("decoder 'ml' needs codebook size 2^" + std::to_string(k) +
                   " within the cap (codebook_cap_log2)");
  }

  std::variant<HeatChannel, NlseChannel> channel = std::visit(
      [&](const auto& grid) -> std::variant<HeatChannel, NlseChannel> {
        using G = std::decay_t<decltype(grid)>;
        if constexpr (std::is_same_v<G, HeatGrid>) {
          return HeatChannel(grid, make_heat_layout(grid, n, cfg.t0, 0.0, cfg.sensors,
                                                    cfg.spacing, cfg.min_spacing_factor));
        } else {
          return NlseChannel(grid, make_nlse_layout(grid, n, cfg.t0, 0.0, cfg.sensors,
                                                    cfg.spacing, cfg.min_spacing_factor));
        }
      },
      cfg.grid);

  json resolved;
  resolved["pde"] = cfg.pde == Pde::Heat ? "heat" : "nlse";
  resolved["code"] = cfg.code_path;
  resolved["code_shape"] = {H.rows(), H.cols()};
  resolved["grid"] = grid_json(cfg);
  resolved["layout"] =
      std::visit([&](const auto& ch) { return layout_json(cfg, ch); }, channel);
  resolved["decoder"] = {{"eta", cfg.decoder.eta},
                         {"gamma", cfg.decoder.gamma},
                         {"alpha", cfg.decoder.potential.alpha},
                         {"beta", cfg.decoder.potential.beta},
                         {"epsilon_clamp", cfg.decoder.potential.epsilon_clamp},
                         {"iterations", cfg.decoder.iterations},
                         {"init", decoder_init_name(cfg.decoder)},
                         {"init_sigma", cfg.decoder.init_sigma},
                         {"divergence_limit", cfg.decoder.divergence_limit}};
  json decs = json::array();
  for (DecoderId d : cfg.decoders) decs.push_back(decoder_name(d));
  resolved["decoders"] = decs;
  resolved["noise_sigmas"] = cfg.noise_sigmas;
  resolved["trials"] = cfg.trials;
  resolved["seed"] = cfg.seed;
  resolved["codebook_cap"] = cfg.codebook_cap;
  cfg.resolved_json = resolved.dump();
  cfg.config_hash = fnv1a64(cfg.resolved_json);

  CodewordSampler sampler(H);
  return Experiment{std::move(cfg), std::move(H), std::move(sampler), std::move(channel)};
}

namespace {

struct Counter {
  std::uint64_t bits = 0, blocks = 0, diverged = 0;
};

template <class Channel>
BipolarWord run_decoder(DecoderId id, const Experiment& exp, const Channel& ch,
                        const typename Channel::ObsVec& y, double sigma, std::uint64_t trial,
                        const std::vector<typename Channel::ObsVec>* ml_images,
                        const Codebook* book, bool* diverged) {
  switch (id) {
    case DecoderId::Gf: {
      RngStream init_rng(exp.cfg.seed, {kInitSalt, sigma_bits(sigma), trial});
      const DecodeResult r = gf_decode(y, ch, exp.H, exp.cfg.decoder, init_rng);
      if (diverged) *diverged = r.diverged;
      return r.estimate;
    }
    case DecoderId::Peak:
      return peak_detect(y, ch.layout());
    case DecoderId::Bp:
      if constexpr (std::is_same_v<Channel, NlseChannel>) return bp_detect(y, ch);
      else throw std::logic_error("bp decoder on a heat channel");
    case DecoderId::Ml: {
      const size_t idx = ml_decode_index(y, *ml_images);
      return book->words[idx];
    }
  }
  throw std::logic_error("unknown decoder");
}

template <class Channel>
std::vector<BerRecord> sweep_channel(const Experiment& exp, const Channel& base, unsigned threads) {
  const size_t n = exp.word_length();
  const auto& cfg = exp.cfg;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, cfg.trials));

  bool want_ml = false;
  for (DecoderId d : cfg.decoders)
    if (d == DecoderId::Ml) want_ml = true;
  Codebook book;
  std::vector<typename Channel::ObsVec> images;
  if (want_ml) {
    book = enumerate_codebook(exp.H, cfg.codebook_cap);
    images.reserve(book.words.size());
    for (const BipolarWord& w : book.words) images.push_back(base.forward(w));
  }

  std::vector<BerRecord> records;
  for (size_t sidx = 0; sidx < cfg.noise_sigmas.size(); ++sidx) {
    const double sigma = cfg.noise_sigmas[sidx];
    const Channel ch = base.with_sigma(sigma);

    std::vector<std::vector<Counter>> per_thread(threads,
                                                 std::vector<Counter>(cfg.decoders.size()));
    std::vector<std::thread> pool;
    std::vector<std::string> errors(threads);
    const std::uint64_t chunk = (cfg.trials + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t lo = t * chunk;
      const std::uint64_t hi = std::min<std::uint64_t>(cfg.trials, lo + chunk);
      pool.emplace_back([&, t, lo, hi]() {
        try {
          for (std::uint64_t trial = lo; trial < hi; ++trial) {
            RngStream chan_rng(cfg.seed, {kChanSalt, sigma_bits(sigma), trial});
            const BipolarWord word = exp.sampler.sample(chan_rng);
            const auto obs = ch.transmit(word, chan_rng, trial);
            for (size_t di = 0; di < cfg.decoders.size(); ++di) {
              bool diverged = false;
              const BipolarWord est = run_decoder(cfg.decoders[di], exp, ch, obs.y, sigma, trial,
                                                  &images, &book, &diverged);
              Counter& c = per_thread[t][di];
              if (diverged) {
                // diverged runs are block errors with all bits counted wrong
                c.diverged += 1;
                c.blocks += 1;
                c.bits += n;
                continue;
              }
              std::uint64_t bad = 0;
              for (size_t j = 0; j < n; ++j)
                if (est[j] != word[j]) ++bad;
              c.bits += bad;
              if (bad) c.blocks += 1;
            }
          }
        } catch (const std::exception& e) {
          errors[t] = e.what();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& msg : errors)
      if (!msg.empty()) throw std::runtime_error("ber sweep worker failed: " + msg);

    for (size_t di = 0; di < cfg.decoders.size(); ++di) {
      Counter total;
      for (unsigned t = 0; t < threads; ++t) {
        total.bits += per_thread[t][di].bits;
        total.blocks += per_thread[t][di].blocks;
        total.diverged += per_thread[t][di].diverged;
      }
      BerRecord rec;
      rec.decoder = decoder_name(cfg.decoders[di]);
      rec.sigma = sigma;
      rec.trials = cfg.trials;
      rec.bit_errors = total.bits;
      rec.block_errors = total.blocks;
      rec.diverged = total.diverged;
      rec.ber = static_cast<double>(total.bits) /
                (static_cast<double>(cfg.trials) * static_cast<double>(n));
      records.push_back(std::move(rec));
    }
  }
  return records;
}

} // namespace

std::vector<BerRecord> run_ber_sweep(const Experiment& exp, unsigned threads) {
  return std::visit([&](const auto& ch) { return sweep_channel(exp, ch, threads); }, exp.channel);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string ber_records_to_csv(const std::vector<BerRecord>& records, const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "# pdecode ber sweep, schema ber-v1\n";
  out << "# config " << cfg.resolved_json << "\n";
  out << "# config_hash " << hash_hex(cfg.config_hash) << "\n";
  out << "decoder,sigma,trials,bit_errors,block_errors,ber,diverged,config_hash\n";
  for (const BerRecord& r : records) {
    out << r.decoder << ',' << format_double(r.sigma) << ',' << r.trials << ',' << r.bit_errors
        << ',' << r.block_errors << ',' << format_double(r.ber) << ',' << r.diverged << ','
        << hash_hex(cfg.config_hash) << '\n';
  }
  return out.str();
}

std::optional<std::string> oracle_sanity_violation(const std::vector<BerRecord>& records) {
  for (const BerRecord& ml : records) {
    if (ml.decoder != "ml") continue;
    for (const BerRecord& gf : records) {
      if (gf.decoder != "gf" || gf.sigma != ml.sigma) continue;
      const double p = static_cast<double>(ml.block_errors) / static_cast<double>(ml.trials);
      const double se = std::sqrt(static_cast<double>(ml.trials) * p * (1.0 - p));
      const double lower = static_cast<double>(ml.block_errors) - 3.0 * se;
      if (static_cast<double>(gf.block_errors) < lower) {
        return "gf block errors (" + std::to_string(gf.block_errors) +
               ") undercut the ml oracle (" + std::to_string(ml.block_errors) +
               " - 3 SE) at sigma " + format_double(ml.sigma);
      }
    }
  }
  return std::nullopt;
}

namespace {

double heat_loss(const RealVec& u0, const RealVec& y, const std::vector<size_t>& sensors,
                 const HeatGrid& grid) {
  const RealVec uT = fdm_solve(u0, grid);
  double loss = 0;
  for (size_t k = 0; k < sensors.size(); ++k) {
    const double d = uT[sensors[k]] - y[k];
    loss += d * d;
  }
  return loss;
}

double nlse_loss(const CplxVec& U0, const CplxVec& y, const std::vector<size_t>& sensors,
                 const SsfmSolver& solver) {
  const CplxVec uf = solver.solve(U0);
  double loss = 0;
  for (size_t k = 0; k < sensors.size(); ++k) loss += std::norm(uf[sensors[k]] - y[k]);
  return loss;
}

GradcheckComponent gradcheck_heat(std::uint64_t seed) {
  const HeatGrid grid(0.2, 0.005, 0.05, 64, 30); // c = 0.4
  const size_t sz = grid.state_size();
  std::vector<size_t> sensors(sz);
  for (size_t i = 0; i < sz; ++i) sensors[i] = i;
  const double step = 1e-6;
  double worst = 0;
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    RngStream rng(seed, {0x67636874ULL, inst});
    RealVec u0(sz), y(sz);
    for (auto& v : u0) v = rng.gaussian();
    for (auto& v : y) v = rng.gaussian();
    const RealVec g = fdm_input_gradient(u0, y, sensors, grid);
    double num = 0, den = 0;
    for (size_t j = 0; j < sz; ++j) {
      RealVec up = u0, dn = u0;
      up[j] += step;
      dn[j] -= step;
      const double fd = (heat_loss(up, y, sensors, grid) - heat_loss(dn, y, sensors, grid)) /
                        (2 * step);
      num = std::max(num, std::abs(g[j] - fd));
      den = std::max(den, std::abs(fd));
    }
    worst = std::max(worst, num / std::max(den, 1e-300));
  }
  return {"heat", worst, 1e-6, worst <= 1e-6};
}

GradcheckComponent gradcheck_nlse(std::uint64_t seed) {
  const NlseGrid grid(1, 1.0, 64, 16.0, 0.025, 10);
  const SsfmSolver solver(grid);
  std::vector<size_t> sensors(grid.n_tau);
  for (size_t i = 0; i < sensors.size(); ++i) sensors[i] = i;
  const double step = 1e-6;
  double worst = 0;
  for (std::uint64_t inst = 0; inst < 10; ++inst) {
    RngStream rng(seed, {0x67636e6cULL, inst});
    CplxVec U0(grid.n_tau), y(grid.n_tau);
    for (auto& v : U0) {
      const double re = 0.5 * rng.gaussian();
      const double im = 0.5 * rng.gaussian();
      v = {re, im};
    }
    for (auto& v : y) {
      const double re = 0.5 * rng.gaussian();
      const double im = 0.5 * rng.gaussian();
      v = {re, im};
    }
    const CplxVec g = solver.input_gradient(U0, y, sensors);
    double num = 0, den = 0;
    for (size_t j = 0; j < grid.n_tau; ++j) {
      CplxVec up = U0, dn = U0;
      up[j] += step;
      dn[j] -= step;
      const double fd_re = (nlse_loss(up, y, sensors, solver) - nlse_loss(dn, y, sensors, solver)) /
                           (2 * step);
      up = U0;
      dn = U0;
      up[j] += std::complex<double>(0, step);
      dn[j] -= std::complex<double>(0, step);
      const double fd_im = (nlse_loss(up, y, sensors, solver) - nlse_loss(dn, y, sensors, solver)) /
                           (2 * step);
      num = std::max({num, std::abs(g[j].real() - fd_re), std::abs(g[j].imag() - fd_im)});
      den = std::max({den, std::abs(fd_re), std::abs(fd_im)});
    }
    worst = std::max(worst, num / std::max(den, 1e-300));
  }
  return {"nlse", worst, 1e-4, worst <= 1e-4};
}

GradcheckComponent gradcheck_potential(const ParityCheckMatrix& H, std::uint64_t seed) {
  PotentialParams params;
  double worst = 0;
  for (std::uint64_t inst = 0; inst < 100; ++inst) {
    RngStream rng(seed, {0x67637074ULL, inst});
    RealVec x(H.cols());
    for (auto& v : x) {
      const double mag = 0.1 + 1.9 * rng.uniform();
      v = rng.uniform() < 0.5 ? -mag : mag;
    }
    const RealVec a = potential_gradient(x, H, params);
    const RealVec b = potential_gradient_naive(x, H, params);
    for (size_t j = 0; j < x.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  }
  return {"potential", worst, 1e-9, worst <= 1e-9};
}

} // namespace

GradcheckReport gradcheck(const Experiment& exp) {
  GradcheckReport rep;
  rep.components.push_back(gradcheck_heat(exp.cfg.seed));
  rep.components.push_back(gradcheck_nlse(exp.cfg.seed));
  rep.components.push_back(gradcheck_potential(exp.H, exp.cfg.seed));
  rep.all_pass = true;
  for (const auto& c : rep.components)
    if (!c.pass) rep.all_pass = false;
  return rep;
}

std::string gradcheck_to_text(const GradcheckReport& report) {
  std::ostringstream out;
  for (const auto& c : report.components) {
    out << "gradcheck " << c.name << " max_err=" << format_double(c.error)
        << " tol=" << format_double(c.tol) << (c.pass ? " PASS" : " FAIL") << "\n";
  }
  out << (report.all_pass ? "gradcheck PASS" : "gradcheck FAIL") << "\n";
  return out.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string real_waveform_csv(const RealVec& u, double origin, double step) {
  std::ostringstream out;
  out << "x,u\n";
  for (size_t k = 0; k < u.size(); ++k)
    out << format_double(origin + static_cast<double>(k) * step) << ',' << format_double(u[k])
        << '\n';
  return out.str();
}

std::string cplx_waveform_csv(const CplxVec& u, double step) {
  std::ostringstream out;
  out << "tau,re,im,abs\n";
  for (size_t k = 0; k < u.size(); ++k)
    out << format_double(static_cast<double>(k) * step) << ',' << format_double(u[k].real()) << ','
        << format_double(u[k].imag()) << ',' << format_double(std::abs(u[k])) << '\n';
  return out.str();
}

std::string trace_csv(const std::vector<TracePoint>& tr) {
  std::ostringstream out;
  out << "iteration,squared_error,potential_energy\n";
  for (size_t k = 0; k < tr.size(); ++k)
    out << k << ',' << format_double(tr[k].squared_error) << ','
        << format_double(tr[k].potential_energy) << '\n';
  return out.str();
}

} // namespace

std::vector<std::string> simulate(const Experiment& exp, const SimulateOptions& opts,
                                  const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const double sigma = exp.cfg.noise_sigmas.front();
  RngStream chan_rng(exp.cfg.seed, {kChanSalt, sigma_bits(sigma), 0});
  BipolarWord word;
  if (opts.word) {
    if (opts.word->size() != exp.word_length())
      throw std::invalid_argument("simulate: word length mismatch");
    word = *opts.word;
    // keep the stream position identical to a sweep trial
    exp.sampler.sample(chan_rng);
  } else {
    word = exp.sampler.sample(chan_rng);
  }

  std::vector<std::string> written;
  const auto emit = [&](const std::string& name, const std::string& content) {
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    write_file(path, content);
    written.push_back(path);
  };

  std::visit(
      [&](const auto& ch0) {
        const auto ch = ch0.with_sigma(sigma);
        using Channel = std::decay_t<decltype(ch)>;
        RealVec s(word.size());
        for (size_t i = 0; i < word.size(); ++i) s[i] = static_cast<double>(word[i]);
        const auto u0 = ch.synth(s);
        const auto uT = ch.solve(u0);
        const auto obs = ch.transmit(word, chan_rng, 0);

        std::ostringstream obs_csv;
        obs_csv << "position,y_re,y_im\n";
        if constexpr (std::is_same_v<Channel, HeatChannel>) {
          emit("input_waveform.csv", real_waveform_csv(u0, ch.grid().ell, ch.grid().ell));
          emit("output_waveform.csv", real_waveform_csv(uT, ch.grid().ell, ch.grid().ell));
          for (size_t k = 0; k < obs.y.size(); ++k)
            obs_csv << format_double(ch.layout().sensor_positions[k]) << ','
                    << format_double(obs.y[k]) << ",\n";
        } else {
          emit("input_waveform.csv", cplx_waveform_csv(u0, ch.grid().dtau()));
          emit("output_waveform.csv", cplx_waveform_csv(uT, ch.grid().dtau()));
          for (size_t k = 0; k < obs.y.size(); ++k)
            obs_csv << format_double(ch.layout().sensor_positions[k]) << ','
                    << format_double(obs.y[k].real()) << ',' << format_double(obs.y[k].imag())
                    << '\n';
        }
        emit("observation.csv", obs_csv.str());

        if (opts.decode) {
          GfDecoderParams params = exp.cfg.decoder;
          params.record_trace = true;
          RngStream init_rng(exp.cfg.seed, {kInitSalt, sigma_bits(sigma), 0});
          const DecodeResult r = gf_decode(obs.y, ch, exp.H, params, init_rng);
          emit("trace.csv", trace_csv(r.trajectory));
        }
      },
      exp.channel);
  return written;
}

SingleDecode decode_once(const Experiment& exp, DecoderId decoder, double sigma,
                         std::uint64_t trial, const std::optional<BipolarWord>& word,
                         const std::optional<std::string>& trace_csv_path) {
  if (decoder == DecoderId::Bp && exp.cfg.pde != Pde::Nlse)
    throw std::invalid_argument("decoder 'bp' requires the nlse channel");

  return std::visit(
      [&](const auto& ch0) -> SingleDecode {
        const auto ch = ch0.with_sigma(sigma);
        using Channel = std::decay_t<decltype(ch)>;
        RngStream chan_rng(exp.cfg.seed, {kChanSalt, sigma_bits(sigma), trial});
        BipolarWord truth;
        if (word) {
          if (word->size() != exp.word_length())
            throw std::invalid_argument("decode: word length mismatch");
          truth = *word;
          exp.sampler.sample(chan_rng); // keep stream position identical to a sweep trial
        } else {
          truth = exp.sampler.sample(chan_rng);
        }
        const auto obs = ch.transmit(truth, chan_rng, trial);

        SingleDecode out;
        out.truth = truth;
        if (decoder == DecoderId::Gf) {
          GfDecoderParams params = exp.cfg.decoder;
          params.record_trace = trace_csv_path.has_value();
          RngStream init_rng(exp.cfg.seed, {kInitSalt, sigma_bits(sigma), trial});
          const DecodeResult r = gf_decode(obs.y, ch, exp.H, params, init_rng);
          out.estimate = r.estimate;
          out.diverged = r.diverged;
          out.is_codeword = r.is_codeword;
          if (trace_csv_path) write_file(*trace_csv_path, trace_csv(r.trajectory));
        } else if (decoder == DecoderId::Peak) {
          out.estimate = peak_detect(obs.y, ch.layout());
        } else if (decoder == DecoderId::Bp) {
          if constexpr (std::is_same_v<Channel, NlseChannel>) out.estimate = bp_detect(obs.y, ch);
        } else {
          const Codebook book = enumerate_codebook(exp.H, exp.cfg.codebook_cap);
          std::vector<typename Channel::ObsVec> images;
          images.reserve(book.words.size());
          for (const BipolarWord& w : book.words) images.push_back(ch.forward(w));
          out.estimate = book.words[ml_decode_index(obs.y, images)];
        }
        if (out.diverged) {
          out.bit_errors = exp.word_length();
          out.block_error = true;
        } else {
          for (size_t j = 0; j < truth.size(); ++j)
            if (out.estimate[j] != truth[j]) ++out.bit_errors;
          out.block_error = out.bit_errors > 0;
        }
        if (!out.estimate.empty() && decoder != DecoderId::Gf) {
          const BitVec syn = syndrome(exp.H, binary_map(out.estimate));
          out.is_codeword = true;
          for (auto b : syn)
            if (b) out.is_codeword = false;
        }
        return out;
      },
      exp.channel);
}

BipolarWord parse_word(const std::string& text, size_t expected_length) {
  BipolarWord w;
  if (text.find(',') != std::string::npos) {
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok == "+1" || tok == "1") w.push_back(1);
      else if (tok == "-1") w.push_back(-1);
      else throw std::invalid_argument("word: entries must be +1 or -1");
    }
  } else {
    for (char c : text) {
      if (c == '+') w.push_back(1);
      else if (c == '-') w.push_back(-1);
      else throw std::invalid_argument("word: use '+'/'-' characters or a comma list of +1/-1");
    }
  }
  if (w.size() != expected_length)
    throw std::invalid_argument("word: expected " + std::to_string(expected_length) +
                                " entries, got " + std::to_string(w.size()));
  return w;
}

} // namespace pdecode
