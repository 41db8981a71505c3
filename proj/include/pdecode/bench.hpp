#ifndef PDECODE_BENCH_HPP
#define PDECODE_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pdecode/channel.hpp"
#include "pdecode/decoder.hpp"
#include "pdecode/gf2.hpp"

namespace pdecode {

enum class Pde { Heat, Nlse };
enum class DecoderId { Gf, Peak, Bp, Ml };

const char* decoder_name(DecoderId id);

// Fully resolved experiment description. Parsed from a JSON document; every
// default is materialized, so resolved_json (echoed into all outputs,
// together with its FNV-1a hash) identifies the run completely.
struct ExperimentConfig {
  Pde pde = Pde::Heat;
  std::string code_path;
  std::variant<HeatGrid, NlseGrid> grid{HeatGrid(0.2, 0.005, 0.05, 200, 100)};
  double t0 = 0.0;
  double spacing = 0.0; // 0 selects even L/(n+1) placement
  SensorMode sensors = SensorMode::AllGridPoints;
  double min_spacing_factor = 6.0;
  std::optional<double> dispersion_length; // NLSE: t0 = sqrt(L_D) when t0 is absent
  GfDecoderParams decoder;
  std::vector<double> noise_sigmas;
  std::uint64_t trials = 1000;
  std::vector<DecoderId> decoders{DecoderId::Gf, DecoderId::Peak};
  std::uint64_t seed = 1;
  std::uint64_t codebook_cap = kDefaultCodebookCap;

  std::string resolved_json; // canonical (sorted-key, compact) echo
  std::uint64_t config_hash = 0;
};

ExperimentConfig parse_experiment_json(const std::string& json_text);

// Config bound to its loaded code and constructed channel. The channel is
// built at sigma = 0; sweeps rebind sigma per noise level.
struct Experiment {
  ExperimentConfig cfg;
  ParityCheckMatrix H;
  CodewordSampler sampler;
  std::variant<HeatChannel, NlseChannel> channel;

  size_t word_length() const { return H.cols(); }
};

Experiment build_experiment(const ExperimentConfig& cfg);

struct BerRecord {
  std::string decoder;
  double sigma = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t block_errors = 0;
  std::uint64_t diverged = 0;
  double ber = 0.0;
};

// Monte-Carlo sweep over (sigma, decoder). Each trial derives its RNG
// streams from (seed, sigma bits, trial index), so results are identical for
// any thread count and any execution order. threads == 0 picks the hardware
// concurrency.
std::vector<BerRecord> run_ber_sweep(const Experiment& exp, unsigned threads = 0);

std::string ber_records_to_csv(const std::vector<BerRecord>& records, const ExperimentConfig& cfg);

// Oracle sanity: with both gf and ml in a sweep, gf block errors must not
// undercut ml block errors by more than 3 binomial standard errors. Returns
// a description of the first violation, if any.
std::optional<std::string> oracle_sanity_violation(const std::vector<BerRecord>& records);

struct GradcheckComponent {
  std::string name;
  double error = 0.0;
  double tol = 0.0;
  bool pass = false;
};
struct GradcheckReport {
  std::vector<GradcheckComponent> components;
  bool all_pass = false;
};

// Finite-difference oracles for the heat and NLSE input gradients plus the
// naive-vs-vectorized potential gradient, at the pinned oracle sizes.
GradcheckReport gradcheck(const Experiment& exp);
std::string gradcheck_to_text(const GradcheckReport& report);

struct SimulateOptions {
  std::optional<BipolarWord> word; // default: random word of trial 0
  bool decode = false;             // also run gf and dump the iteration trace
};

// Writes input_waveform.csv, output_waveform.csv, observation.csv (and
// trace.csv when decoding) into out_dir; returns the paths written.
std::vector<std::string> simulate(const Experiment& exp, const SimulateOptions& opts,
                                  const std::string& out_dir);

struct SingleDecode {
  BipolarWord estimate;
  BipolarWord truth;
  std::uint64_t bit_errors = 0;
  bool block_error = false;
  bool diverged = false;
  bool is_codeword = false;
};

SingleDecode decode_once(const Experiment& exp, DecoderId decoder, double sigma,
                         std::uint64_t trial, const std::optional<BipolarWord>& word = {},
                         const std::optional<std::string>& trace_csv_path = {});

// shortest exact decimal representation (std::to_chars), used for all CSV
// payloads so reruns are byte-identical
std::string format_double(double v);

BipolarWord parse_word(const std::string& text, size_t expected_length);

} // namespace pdecode

#endif
